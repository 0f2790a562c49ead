"""Serving-distance densities and association probabilities.

The nearest ``eta``-type UAV on tier ``k`` follows from the void probability
of the link-thinned PPP, whose intensity at horizontal distance ``z`` is
``2 pi lambda_k p_{k,eta}(z) z``. The recurring integral
``W_{k,eta}(Z) = int_0^Z z p_{k,eta}(z) dz`` is tabulated once per tier/link.
"""
from __future__ import annotations

import functools
import math

import numpy as np

from . import tables
from .channel import ChannelParams, LinkType, link_probability
from .geometry import equivalent_distance_cdas, equivalent_distance_mapas
from .network import AssociationScheme, NetworkConfig, TierConfig
from .quadrature import QuadratureResult, integrate_finite

LINKS = (LinkType.LOS, LinkType.NLOS)
# void-factor floor that sets the upper end of the serving-distance support
VOID_FLOOR = 1e-12


class LinkIntegral:
    """``W(Z) = int_0^Z z p(z) dz`` for one tier and link type."""

    def __init__(self, height: float, link: LinkType, params: ChannelParams):
        self.height = height
        self.link = link
        self.params = params
        edges, nodes, weights = tables.tier_grid(height)
        self.edges = edges
        self._slopes = edges * link_probability(link, edges, height, params)
        panel = (weights * nodes * link_probability(link, nodes, height, params)).sum(axis=-1)
        self._values = tables.running_from_zero(panel)
        self._p_end = float(link_probability(link, edges[-1], height, params))

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        inside = tables.hermite(self.edges, self._values, self._slopes, z.reshape(1, -1)).reshape(z.shape)
        zmax = self.edges[-1]
        # p is constant to many digits that far out
        outside = self._values[-1] + 0.5 * self._p_end * (z * z - zmax * zmax)
        out = np.where(z > zmax, outside, inside)
        return out if out.ndim else float(out)


@functools.lru_cache(maxsize=64)
def link_integral(height: float, link: LinkType, params: ChannelParams) -> LinkIntegral:
    return LinkIntegral(height, link, params)


def _horizontal(r, height):
    r = np.asarray(r, dtype=float)
    return np.sqrt(np.maximum(0.0, r * r - height * height))


def nearest_distance_pdf(tier: TierConfig, link: LinkType, r, params: ChannelParams):
    """Density of the 3-D distance to the nearest ``link``-type UAV of one tier."""
    r = np.asarray(r, dtype=float)
    z = _horizontal(r, tier.height)
    w = link_integral(tier.height, link, params)(z)
    lam = tier.density
    f = 2 * math.pi * lam * r * link_probability(link, z, tier.height, params) * np.exp(-2 * math.pi * lam * w)
    f = np.where(r >= tier.height, f, 0.0)
    return f if f.ndim else float(f)


def exclusion_exponent(scheme: AssociationScheme, k_serv: int, link: LinkType, r,
                       network: NetworkConfig):
    """Minus log of the probability that no UAV beats the candidate at distance ``r``.

    Includes the serving tier's own same-link void term, so the density is
    ``2 pi lambda r p(...) * exp(-exponent)`` for both schemes.
    """
    r = np.asarray(r, dtype=float)
    params = network.channel
    total = np.zeros_like(r)
    if scheme is AssociationScheme.CDAS:
        for tier in network.tiers:
            z = equivalent_distance_cdas(r, tier.height)
            total = total + math.pi * tier.density * z * z
        return total
    other = link.other
    tier_s = network.tiers[k_serv]
    z_self = _horizontal(r, tier_s.height)
    total = total + 2 * math.pi * tier_s.density * link_integral(tier_s.height, link, params)(z_self)
    for k, tier in enumerate(network.tiers):
        z_o = equivalent_distance_mapas(r, link, other, tier.height, params)
        total = total + 2 * math.pi * tier.density * link_integral(tier.height, other, params)(z_o)
        if k != k_serv:
            z_s = equivalent_distance_mapas(r, link, link, tier.height, params)
            total = total + 2 * math.pi * tier.density * link_integral(tier.height, link, params)(z_s)
    return total


def serving_pdf(scheme: AssociationScheme, tier_index: int, link: LinkType, r,
                network: NetworkConfig):
    """Joint density of serving distance ``r`` and association to (tier, link)."""
    r = np.asarray(r, dtype=float)
    tier = network.tiers[tier_index]
    z = _horizontal(r, tier.height)
    p = link_probability(link, z, tier.height, network.channel)
    expo = exclusion_exponent(scheme, tier_index, link, r, network)
    f = 2 * math.pi * tier.density * r * p * np.exp(-expo)
    f = np.where(r >= tier.height, f, 0.0)
    return f if f.ndim else float(f)


def upper_radius(scheme: AssociationScheme, tier_index: int, link: LinkType,
                 network: NetworkConfig, floor: float = VOID_FLOOR) -> float:
    """Radius beyond which the exclusion factor is below ``floor``."""
    h = network.tiers[tier_index].height
    target = -math.log(floor)
    r = h
    while r < 1e8:
        r *= 1.1
        if exclusion_exponent(scheme, tier_index, link, np.array([r]), network)[0] > target:
            return r
    return r


def breakpoints(scheme: AssociationScheme, tier_index: int, link: LinkType,
                network: NetworkConfig, r_max: float) -> list[float]:
    """Radii where a ``max(0, .)`` in an exclusion radius switches on."""
    params = network.channel
    h_s = network.tiers[tier_index].height
    pts = {h_s, r_max}
    for tier in network.tiers:
        pts.add(tier.height)
        if scheme is AssociationScheme.MAPAS:
            other = link.other
            a_s, a_o = params.atten(link), params.atten(other)
            al_s, al_o = params.alpha(link), params.alpha(other)
            # (a_s/a_o)^(-2/al_o) r^(2 al_s/al_o) = H^2
            r_k = (tier.height ** 2 * (a_s / a_o) ** (2.0 / al_o)) ** (al_o / (2.0 * al_s))
            pts.add(r_k)
    return sorted(p for p in pts if h_s <= p <= r_max)


def integrate_over_r(func, scheme: AssociationScheme, tier_index: int, link: LinkType,
                     network: NetworkConfig, rel_tol: float = 1e-7,
                     abs_tol: float = 1e-10) -> QuadratureResult:
    """Integrate ``func(r)`` over the serving-distance support, split at kinks."""
    r_max = upper_radius(scheme, tier_index, link, network)
    pts = breakpoints(scheme, tier_index, link, network, r_max)
    value = err = 0.0
    n = 0
    ok = True
    msgs = []
    for a, b in zip(pts[:-1], pts[1:]):
        res = integrate_finite(func, a, b, rel_tol, abs_tol)
        value += res.value
        err += res.error_estimate
        n += res.evaluations
        ok &= res.converged
        if res.message:
            msgs.append(res.message)
    return QuadratureResult(value, err, n, ok, "; ".join(msgs))


def association_probability(scheme: AssociationScheme, tier_index: int, link: LinkType,
                            network: NetworkConfig, rel_tol: float = 1e-8) -> QuadratureResult:
    def f(r):
        return serving_pdf(scheme, tier_index, link, r, network)
    return integrate_over_r(f, scheme, tier_index, link, network, rel_tol=rel_tol)


def association_table(network: NetworkConfig, scheme: AssociationScheme | None = None):
    """Association probability for every (tier, link) cell."""
    scheme = scheme or network.scheme
    return {(k, link): association_probability(scheme, k, link, network).value
            for k in range(len(network.tiers)) for link in LINKS}
