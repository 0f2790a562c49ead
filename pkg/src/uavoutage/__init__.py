"""Outage analysis of multi-tier UAV networks with 3-D beamforming and beam misalignment."""
from .channel import AntennaPattern, ChannelParams, LinkType, antenna_from_count, los_probability
from .geometry import ServingContext, projection_region
from .interference import LaplaceEngine, laplace_transform, log_laplace, mainlobe_probability
from .montecarlo import AssociationMode, estimate_outage, sample_realization
from .network import (AssociationScheme, MisalignmentModel, NetworkConfig, TierConfig,
                      UniformError, reference_network)
from .outage import case_probabilities, outage_probability, perfect_alignment_outage
from .serving import association_probability, serving_pdf

__version__ = "0.1.0"

__all__ = [
    "AntennaPattern", "AssociationMode", "AssociationScheme", "ChannelParams", "LaplaceEngine",
    "LinkType", "MisalignmentModel", "NetworkConfig", "TierConfig", "UniformError",
    "antenna_from_count", "association_probability", "case_probabilities", "estimate_outage",
    "laplace_transform", "log_laplace", "los_probability", "mainlobe_probability",
    "outage_probability", "perfect_alignment_outage", "projection_region", "reference_network",
    "sample_realization", "serving_pdf", "ServingContext", "__version__",
]
