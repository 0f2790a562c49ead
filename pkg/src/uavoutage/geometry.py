"""Footprint of the UE main lobe on a UAV tier and association exclusion radii."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import AntennaPattern, ChannelParams, LinkType


@dataclass(frozen=True)
class ProjectionRegion:
    """Ring sector ``inner_radius <= z <= outer_radius`` spanning ``angle`` radians.

    ``outer_radius`` is ``math.inf`` when the lower beam edge points at or
    above the horizon; it is never replaced by a large finite number.
    """

    inner_radius: float
    outer_radius: float
    angle: float

    def __post_init__(self):
        if not 0 <= self.inner_radius <= self.outer_radius:
            raise ValueError("need 0 <= inner_radius <= outer_radius")
        if not 0 < self.angle < 2 * math.pi:
            raise ValueError("angle must lie in (0, 2*pi)")

    @property
    def unbounded(self) -> bool:
        return math.isinf(self.outer_radius)


@dataclass(frozen=True)
class ServingContext:
    """State of the typical link needed by the interference model."""

    tier_index: int
    link: LinkType
    distance: float
    serving_height: float
    ue_elevation_error: float = 0.0

    def __post_init__(self):
        if self.distance < self.serving_height * (1 - 1e-12):
            raise ValueError("serving distance is below the tier height")

    @property
    def elevation_angle(self) -> float:
        return math.asin(min(1.0, self.serving_height / self.distance))


def ring_radii(pointing, target_height, width_elevation):
    """Inner and outer radius of the footprint for a UE beam elevation ``pointing``.

    ``pointing`` is the elevation of the (possibly misaligned) UE boresight,
    i.e. serving elevation plus UE elevation error. Vectorized over ``pointing``.
    """
    pointing = np.asarray(pointing, dtype=float)
    half = 0.5 * width_elevation
    top = 0.5 * math.pi - half
    covers_zenith = pointing >= top
    upper = pointing + half
    with np.errstate(divide="ignore", invalid="ignore"):
        z_in = np.where(covers_zenith, 0.0, target_height / np.tan(upper))
        # whole beam at or below the horizon: the footprint is empty
        z_in = np.where(upper <= 0.0, np.inf, z_in)
        above = pointing > half
        lo = np.where(above, pointing - half, 1.0)
        z_out = np.where(above, target_height / np.tan(lo), np.inf)
    rim = 0.5 * math.pi - width_elevation
    overhead_out = target_height / math.tan(rim) if rim > 0 else math.inf
    z_out = np.where(covers_zenith, overhead_out, z_out)
    return z_in, z_out


def projection_region(ctx: ServingContext, target_height: float,
                      ue_pattern: AntennaPattern) -> ProjectionRegion:
    if target_height <= 0:
        raise ValueError("target_height must be positive")
    pointing = ctx.elevation_angle + ctx.ue_elevation_error
    z_in, z_out = ring_radii(pointing, target_height, ue_pattern.width_elevation)
    return ProjectionRegion(float(z_in), float(z_out), ue_pattern.width_azimuth)


def equivalent_distance_cdas(r, target_height):
    r = np.asarray(r, dtype=float)
    z = np.sqrt(np.maximum(0.0, r * r - target_height * target_height))
    return z if z.ndim else float(z)


def equivalent_distance_mapas(r, serving_link: LinkType, other_link: LinkType,
                              target_height, params: ChannelParams):
    """Closest horizontal distance an `other_link` interferer may have on a tier.

    Any closer UAV would offer a larger ``A * d**-alpha`` than the serving one
    at 3-D distance ``r``. Transmit powers do not enter the comparison.
    """
    r = np.asarray(r, dtype=float)
    if serving_link is other_link:
        sq = r * r
    else:
        a_s, a_o = params.atten(serving_link), params.atten(other_link)
        al_s, al_o = params.alpha(serving_link), params.alpha(other_link)
        sq = (a_s / a_o) ** (-2.0 / al_o) * r ** (2.0 * al_s / al_o)
    z = np.sqrt(np.maximum(0.0, sq - target_height * target_height))
    return z if z.ndim else float(z)
