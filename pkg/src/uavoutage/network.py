"""Configuration types for a K-tier UAV network and its beam misalignment."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .channel import AntennaPattern, ChannelParams, antenna_from_count


class AssociationScheme(enum.Enum):
    MAPAS = "MAPAS"  # maximum average received power
    CDAS = "CDAS"    # closest 3-D distance


@dataclass(frozen=True)
class TierConfig:
    height: float
    density: float
    tx_power: float
    uav_antennas: int = 9

    def __post_init__(self):
        if not self.height > 0:
            raise ValueError("tier height must be positive")
        if not self.density >= 0:
            raise ValueError("tier density must be non-negative")
        if not self.tx_power > 0:
            raise ValueError("tier tx_power must be positive")
        antenna_from_count(self.uav_antennas)

    @property
    def pattern(self) -> AntennaPattern:
        return antenna_from_count(self.uav_antennas)


@dataclass(frozen=True)
class UniformError:
    """Beamsteering error uniform on ``[low, high]``; ``low == high`` is a point mass."""

    low: float = 0.0
    high: float = 0.0

    def __post_init__(self):
        if not self.low <= 0 <= self.high:
            raise ValueError("support must contain zero: low <= 0 <= high")

    @property
    def support(self) -> tuple[float, float]:
        return self.low, self.high

    @property
    def degenerate(self) -> bool:
        return self.low == self.high

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        if self.degenerate:
            raise ValueError("point-mass error has no density")
        return np.where((x >= self.low) & (x <= self.high), 1.0 / (self.high - self.low), 0.0)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        if self.degenerate:
            return np.where(x >= self.low, 1.0, 0.0)
        return np.clip((x - self.low) / (self.high - self.low), 0.0, 1.0)

    def from_uniform(self, u):
        """Inverse-CDF transform of uniforms in [0, 1)."""
        return self.low + (self.high - self.low) * np.asarray(u, dtype=float)

    def within(self, half_width: float) -> float:
        """Probability mass inside ``[-half_width, half_width]``."""
        if self.degenerate:
            return 1.0 if abs(self.low) <= half_width else 0.0
        return float(self.cdf(half_width) - self.cdf(-half_width))


@dataclass(frozen=True)
class MisalignmentModel:
    """Independent errors per node (UE, UAV) and plane (azimuth, elevation)."""

    ue_azimuth: UniformError = UniformError()
    ue_elevation: UniformError = UniformError()
    uav_azimuth: UniformError = UniformError()
    uav_elevation: UniformError = UniformError()

    @classmethod
    def symmetric(cls, uav_max: float, ue_max: float) -> "MisalignmentModel":
        uav = UniformError(-uav_max, uav_max)
        ue = UniformError(-ue_max, ue_max)
        return cls(ue_azimuth=ue, ue_elevation=ue, uav_azimuth=uav, uav_elevation=uav)

    @classmethod
    def perfect(cls) -> "MisalignmentModel":
        return cls()

    @property
    def is_perfect(self) -> bool:
        return all(d.degenerate and d.low == 0.0 for d in
                   (self.ue_azimuth, self.ue_elevation, self.uav_azimuth, self.uav_elevation))


REFERENCE_MISALIGNMENT = MisalignmentModel.symmetric(math.pi / 8, math.pi / 12)


def db_to_linear(db):
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0)


def linear_to_db(x):
    return 10.0 * np.log10(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class NetworkConfig:
    tiers: tuple[TierConfig, ...]
    channel: ChannelParams = field(default_factory=ChannelParams)
    ue_antennas: int = 4
    misalignment: MisalignmentModel = REFERENCE_MISALIGNMENT
    sinr_threshold: float = 1.0
    scheme: AssociationScheme = AssociationScheme.MAPAS

    def __post_init__(self):
        object.__setattr__(self, "tiers", tuple(self.tiers))
        if not self.tiers:
            raise ValueError("at least one tier is required")
        heights = [t.height for t in self.tiers]
        if any(b < a for a, b in zip(heights, heights[1:])):
            raise ValueError("tier heights must be non-decreasing")
        if not self.sinr_threshold > 0:
            raise ValueError("sinr_threshold must be positive")
        antenna_from_count(self.ue_antennas)

    @property
    def ue_pattern(self) -> AntennaPattern:
        return antenna_from_count(self.ue_antennas)

    def uav_pattern(self, k: int) -> AntennaPattern:
        return self.tiers[k].pattern

    def replace(self, **changes) -> "NetworkConfig":
        return replace(self, **changes)

    def with_uav_antennas(self, n: int) -> "NetworkConfig":
        return self.replace(tiers=tuple(replace(t, uav_antennas=n) for t in self.tiers))

    def with_density(self, density: float) -> "NetworkConfig":
        return self.replace(tiers=tuple(replace(t, density=density) for t in self.tiers))

    def with_heights(self, heights) -> "NetworkConfig":
        return self.replace(tiers=tuple(replace(t, height=float(h)) for t, h in zip(self.tiers, heights)))

    def perfectly_aligned(self) -> "NetworkConfig":
        return self.replace(misalignment=MisalignmentModel.perfect())


def reference_network(uav_antennas: int = 9, scheme: AssociationScheme = AssociationScheme.MAPAS,
                   threshold_db: float = 0.0) -> NetworkConfig:
    """Two tiers at 150/200 m, 1e-5 UAV/m^2, 0/2 dBW, dense-urban channel."""
    tiers = (
        TierConfig(150.0, 1e-5, float(db_to_linear(0.0)), uav_antennas),
        TierConfig(200.0, 1e-5, float(db_to_linear(2.0)), uav_antennas),
    )
    channel = ChannelParams(noise_power=float(db_to_linear(-130.0)))
    return NetworkConfig(tiers=tiers, channel=channel, ue_antennas=4,
                         misalignment=REFERENCE_MISALIGNMENT,
                         sinr_threshold=float(db_to_linear(threshold_db)), scheme=scheme)
