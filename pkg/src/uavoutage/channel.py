"""Air-to-ground channel primitives.

LoS/NLoS probability as a function of horizontal distance, power-law path
gain, Nakagami-m (Gamma power) fading, and the sectorized antenna pattern
derived from the element count of a uniform planar square array.

All powers and gains are linear.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np


class LinkType(enum.Enum):
    LOS = "LoS"
    NLOS = "NLoS"

    @property
    def other(self) -> "LinkType":
        return LinkType.NLOS if self is LinkType.LOS else LinkType.LOS


@dataclass(frozen=True)
class ChannelParams:
    """Propagation environment shared by every tier."""

    alpha_los: float = 2.5
    alpha_nlos: float = 4.0
    atten_los: float = 1.0
    atten_nlos: float = 0.01
    m_los: int = 3
    m_nlos: int = 1
    env_a: float = 11.95
    env_b: float = 0.136
    noise_power: float = 1e-13

    def __post_init__(self):
        for name in ("alpha_los", "alpha_nlos"):
            if not getattr(self, name) > 2:
                raise ValueError(f"{name} must be > 2, got {getattr(self, name)}")
        for name in ("m_los", "m_nlos"):
            m = getattr(self, name)
            if int(m) != m or m < 1:
                raise ValueError(f"{name} must be a positive integer, got {m}")
            object.__setattr__(self, name, int(m))
        for name in ("atten_los", "atten_nlos"):
            if not 0 < getattr(self, name) <= 1:
                raise ValueError(f"{name} must lie in (0, 1], got {getattr(self, name)}")
        if not self.noise_power > 0:
            raise ValueError("noise_power must be positive")

    def alpha(self, link: LinkType) -> float:
        return self.alpha_los if link is LinkType.LOS else self.alpha_nlos

    def atten(self, link: LinkType) -> float:
        return self.atten_los if link is LinkType.LOS else self.atten_nlos

    def m(self, link: LinkType) -> int:
        return self.m_los if link is LinkType.LOS else self.m_nlos


@dataclass(frozen=True)
class AntennaPattern:
    """Two-level sectorized pattern: main lobe inside the beamwidth rectangle."""

    main_gain: float
    side_gain: float
    width_azimuth: float
    width_elevation: float

    def __post_init__(self):
        if not 0 < self.side_gain <= self.main_gain:
            raise ValueError("need 0 < side_gain <= main_gain")
        for w in (self.width_azimuth, self.width_elevation):
            if not 0 < w <= math.pi:
                raise ValueError(f"beamwidth {w} outside (0, pi]")


def los_probability(z, height, params: ChannelParams):
    """Probability that a UAV at horizontal distance `z` and altitude `height` is LoS.

    ``z = 0`` uses the exact limit ``arctan(H / 0+) = pi / 2``; ``np.arctan2``
    returns that limit directly so no special branch is needed.
    """
    z = np.asarray(z, dtype=float)
    return los_probability_at_elevation(np.arctan2(height, z), params)


def los_probability_at_elevation(elevation, params: ChannelParams):
    """LoS probability for an elevation angle in radians."""
    elev_deg = np.degrees(np.asarray(elevation, dtype=float))
    p = 1.0 / (1.0 + params.env_a * np.exp(-params.env_b * (elev_deg - params.env_a)))
    return p if p.ndim else float(p)


def nlos_probability(z, height, params: ChannelParams):
    p = 1.0 - np.asarray(los_probability(z, height, params))
    return p if p.ndim else float(p)


def link_probability(link: LinkType, z, height, params: ChannelParams):
    if link is LinkType.LOS:
        return los_probability(z, height, params)
    return nlos_probability(z, height, params)


def antenna_from_count(n_antennas: int) -> AntennaPattern:
    """Sectorized pattern of an ``n_antennas`` half-wavelength uniform planar square array."""
    if int(n_antennas) != n_antennas or n_antennas < 1:
        raise ValueError(f"antenna count must be a positive integer, got {n_antennas}")
    n = float(n_antennas)
    sq = math.sqrt(n)
    c = math.sqrt(3.0) / (2.0 * math.pi)
    sn = math.sin(math.sqrt(3.0) / (2.0 * sq))
    side = (sq - c * n * sn) / (sq - c * sn)
    width = math.sqrt(3.0) / sq
    return AntennaPattern(main_gain=n, side_gain=side, width_azimuth=width, width_elevation=width)


def path_gain(distance, link: LinkType, params: ChannelParams):
    """Attenuation times distance^-alpha for the given link type."""
    d = np.asarray(distance, dtype=float)
    if np.any(d <= 0):
        raise ValueError("distance must be positive")
    g = params.atten(link) * d ** (-params.alpha(link))
    return g if g.ndim else float(g)


def gamma_from_uniforms(u, m: int):
    """Unit-mean Gamma(m, 1/m) power from ``m`` uniforms along the last axis.

    Sum of ``m`` unit exponentials scaled by ``1/m``; ``u`` must lie in [0, 1).
    """
    u = np.asarray(u, dtype=float)
    return -np.log1p(-u[..., :m]).sum(axis=-1) / m


def sample_fading(link: LinkType, params: ChannelParams, rng: np.random.Generator, size=None):
    """Draw Nakagami-m power gains, Gamma(shape m, scale 1/m), mean one."""
    m = params.m(link)
    shape = (m,) if size is None else tuple(np.atleast_1d(size)) + (m,)
    h = gamma_from_uniforms(rng.random(shape), m)
    return float(h) if size is None else h
