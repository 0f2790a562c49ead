"""Aggregate interference: decomposed interferer processes and its Laplace transform.

Interferers of tier ``k`` split into four independent PPPs by the gain of the
interfering link (UAV main/side lobe times UE main/side lobe). UAV-side main
lobe hits are an independent thinning with probability ``p_tm``; UE-side
main-lobe hits are those inside the ring-sector footprint of the UE beam.

Two evaluation routes exist for the log-Laplace transform ``Q(s)``:

* :func:`log_laplace` integrates every term with adaptive Gauss-Kronrod and
  serves as the reference;
* :class:`LaplaceEngine` tabulates running integrals per Laplace argument and
  evaluates ``Q`` and its scaled derivatives for many footprints at once.
  It is the production path of :mod:`uavoutage.outage`.

Scaled derivatives ``s**n * d^n/ds^n`` are used throughout so that the
quantities stay O(1) whatever the magnitude of ``s``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import comb, poch

from . import tables
from .channel import AntennaPattern, ChannelParams, LinkType, link_probability
from .geometry import (ServingContext, equivalent_distance_cdas, equivalent_distance_mapas,
                       projection_region, ring_radii)
from .network import AssociationScheme, NetworkConfig
from .quadrature import integrate_finite, integrate_semi_infinite

LINKS = (LinkType.LOS, LinkType.NLOS)
# cases whose interferers sit inside the UE main-lobe footprint
INSIDE_CASES = (0, 2)


@dataclass(frozen=True)
class AlignmentCase:
    index: int  # 1..4
    combined_gain: float


@dataclass(frozen=True)
class DecomposedProcess:
    tier_index: int
    case: AlignmentCase
    density: float
    inside: bool


def alignment_cases(uav: AntennaPattern, ue: AntennaPattern) -> tuple[AlignmentCase, ...]:
    gains = (uav.main_gain * ue.main_gain, uav.main_gain * ue.side_gain,
             uav.side_gain * ue.main_gain, uav.side_gain * ue.side_gain)
    return tuple(AlignmentCase(i + 1, g) for i, g in enumerate(gains))


def mainlobe_probability(uav_pattern: AntennaPattern) -> float:
    """Chance that a uniformly oriented UAV beam covers the UE."""
    return uav_pattern.width_azimuth * uav_pattern.width_elevation / math.pi ** 2


def decomposed_processes(network: NetworkConfig) -> list[DecomposedProcess]:
    out = []
    ue = network.ue_pattern
    for k, tier in enumerate(network.tiers):
        p_tm = mainlobe_probability(tier.pattern)
        for case in alignment_cases(tier.pattern, ue):
            lam = (p_tm if case.index <= 2 else 1.0 - p_tm) * tier.density
            out.append(DecomposedProcess(k, case, lam, case.index in (1, 3)))
    return out


def fading_laplace_factor(z, s, link: LinkType, height: float, tx_power: float,
                          gain: float, params: ChannelParams):
    """Gamma-fading MGF term ``(m / (m + s A P G d^-alpha))^m`` at horizontal ``z``."""
    z = np.asarray(z, dtype=float)
    m = params.m(link)
    x = s * params.atten(link) * tx_power * gain * (z * z + height * height) ** (-0.5 * params.alpha(link))
    out = (m / (m + x)) ** m
    return out if out.ndim else float(out)


def scaled_one_minus_mgf(x, m: int, order: int):
    """``s^n d^n/ds^n [1 - (m/(m+s u))^m]`` for ``n = 0..order``, with ``x = s u``.

    Stacked on a new leading axis. For ``n >= 1`` the closed form is
    ``(-1)^(n+1) (m)_n (m/(m+x))^m (x/(m+x))^n`` with ``(m)_n`` the rising factorial.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((order + 1,) + x.shape)
    out[0] = -np.expm1(-m * np.log1p(x / m))
    if order:
        w = (m / (m + x)) ** m
        y = x / (m + x)
        yn = np.ones_like(x)
        for n in range(1, order + 1):
            yn = yn * y
            out[n] = (-1) ** (n + 1) * poch(m, n) * w * yn
    return out


def exclusion_radius(scheme: AssociationScheme, r, serving_link: LinkType,
                     other_link: LinkType, height: float, params: ChannelParams):
    if scheme is AssociationScheme.CDAS:
        return equivalent_distance_cdas(r, height)
    return equivalent_distance_mapas(r, serving_link, other_link, height, params)


def _limits(z_eq, z_in, z_out):
    """Integration intervals ``(a, b, inside)`` of the ring-sector decomposition."""
    inside = [(max(z_in, z_eq), max(z_out, z_eq))]
    outside_full = [(z_eq, math.inf)]
    outside_sector = [(min(z_in, z_eq), z_in), (max(z_out, z_eq), math.inf)]
    return inside, outside_full, outside_sector


def log_laplace(s: float, ctx: ServingContext, network: NetworkConfig,
                scheme: AssociationScheme | None = None, order: int = 0,
                rel_tol: float = 1e-10, abs_tol: float = 1e-300) -> float:
    """Reference ``s^n d^n/ds^n log L(s)`` of the conditional interference transform.

    ``order=0`` gives ``Q(s) = log L(s) <= 0``. Every term is integrated
    independently with adaptive quadrature; empty intervals contribute zero.
    """
    scheme = scheme or network.scheme
    params = network.channel
    ue = network.ue_pattern
    theta = ue.width_azimuth
    if s == 0:
        return 0.0
    total = []
    for k, tier in enumerate(network.tiers):
        region = projection_region(ctx, tier.height, ue)
        z_in, z_out = region.inner_radius, region.outer_radius
        p_tm = mainlobe_probability(tier.pattern)
        for link in LINKS:
            m = params.m(link)
            base = params.atten(link) * tier.tx_power
            alpha = params.alpha(link)
            z_eq = float(exclusion_radius(scheme, ctx.distance, ctx.link, link, tier.height, params))
            inside, outside_full, outside_sector = _limits(z_eq, z_in, z_out)
            for case in alignment_cases(tier.pattern, ue):
                lam = (p_tm if case.index <= 2 else 1.0 - p_tm) * tier.density
                c = s * base * case.combined_gain

                def integrand(z, c=c, m=m, alpha=alpha, link=link, h=tier.height):
                    x = c * (z * z + h * h) ** (-0.5 * alpha)
                    return scaled_one_minus_mgf(x, m, order)[order] * link_probability(link, z, h, params) * z

                if case.index in (1, 3):
                    pieces = [(theta, a, b) for a, b in inside]
                else:
                    pieces = ([(2 * math.pi - theta, a, b) for a, b in outside_full]
                              + [(theta, a, b) for a, b in outside_sector])
                for weight, a, b in pieces:
                    if not a < b:
                        continue
                    if math.isinf(b):
                        res = integrate_semi_infinite(integrand, a, rel_tol, abs_tol,
                                                      decay_hint=alpha * max(order, 1) - 1)
                    else:
                        res = integrate_finite(integrand, a, b, rel_tol, abs_tol)
                    total.append(-weight * lam * res.value)
    return math.fsum(total)


def derivative_ratios(a):
    """Given ``a_n = s^n d^n/ds^n log F`` return ``b_t = s^t F^(t) / F``.

    Uses ``F^(t) = sum_{i<t} C(t-1, i) (log F)^(t-i) F^(i)``, the derivative of
    ``F' = (log F)' F``. ``a`` has the derivative order on axis 0.
    """
    a = np.asarray(a, dtype=float)
    order = a.shape[0] - 1
    b = [np.ones_like(a[0])]
    for t in range(1, order + 1):
        b.append(sum(comb(t - 1, i, exact=True) * a[t - i] * b[i] for i in range(t)))
    return np.stack(b)


def coverage_from_log_derivatives(a):
    """``sum_t (-s)^t/t! F^(t)`` from scaled log-derivatives ``a`` (order on axis 0)."""
    a = np.asarray(a, dtype=float)
    b = derivative_ratios(a)
    series = sum(((-1) ** t / math.factorial(t)) * b[t] for t in range(a.shape[0]))
    return np.exp(a[0]) * series


def _with_noise(q, s, noise_power):
    """Add the ``exp(-s sigma^2)`` factor to scaled log-derivatives ``q``."""
    a = np.array(q, dtype=float, copy=True)
    a[0] = a[0] - s * noise_power
    if a.shape[0] > 1:
        a[1] = a[1] - s * noise_power
    return a


class CoverageError(ArithmeticError):
    """A coverage partial sum left [0, 1]; the quadrature is not trustworthy."""


def _check_partial_sums(a, tol=1e-6):
    b = derivative_ratios(a)
    f = np.exp(a[0])
    partial = np.zeros_like(f)
    for t in range(a.shape[0]):
        partial = partial + ((-1) ** t / math.factorial(t)) * b[t] * f
        if np.any(partial < -tol) or np.any(partial > 1 + tol):
            raise CoverageError(f"coverage partial sum of order {t} outside [0, 1]: "
                                f"{np.min(partial):.3g}..{np.max(partial):.3g}")


class LaplaceEngine:
    """Tabulated evaluation of ``Q(s)`` and its derivatives for one network.

    Usage: ``tabs = engine.tables(s_values, order)`` then
    ``engine.scaled_log_laplace(tabs, s_values, ctx_link, r, pointing)``.
    """

    def __init__(self, network: NetworkConfig, scheme: AssociationScheme | None = None):
        self.network = network
        self.scheme = scheme or network.scheme
        params = network.channel
        ue = network.ue_pattern
        self.theta_az = ue.width_azimuth
        self.theta_el = ue.width_elevation
        self._tiers = []
        for k, tier in enumerate(network.tiers):
            edges, nodes, weights = tables.tier_grid(tier.height)
            p_tm = mainlobe_probability(tier.pattern)
            cases = alignment_cases(tier.pattern, ue)
            gains = np.array([c.combined_gain for c in cases])
            dens = tier.density * np.array([p_tm, p_tm, 1 - p_tm, 1 - p_tm])
            per_link = []
            for link in LINKS:
                alpha = params.alpha(link)
                u_nodes = params.atten(link) * tier.tx_power * (nodes ** 2 + tier.height ** 2) ** (-0.5 * alpha)
                u_edges = params.atten(link) * tier.tx_power * (edges ** 2 + tier.height ** 2) ** (-0.5 * alpha)
                pz_nodes = link_probability(link, nodes, tier.height, params) * nodes
                pz_edges = link_probability(link, edges, tier.height, params) * edges
                p_end = float(link_probability(link, edges[-1], tier.height, params))
                per_link.append(dict(link=link, m=params.m(link), alpha=alpha, u_nodes=u_nodes,
                                     u_edges=u_edges, wpz=weights * pz_nodes, pz_edges=pz_edges,
                                     p_end=p_end, base=params.atten(link) * tier.tx_power))
            self._tiers.append(dict(height=tier.height, edges=edges, gains=gains, dens=dens,
                                    links=per_link))

    def tables(self, s_values, order: int):
        """Tail integrals ``int_z^inf s^n D_n p z dz`` per tier, case, link and order.

        Returns a list over tiers of ``(values, slopes)`` with shape
        ``(S, 4, 2, order + 1, G)``.
        """
        s_values = np.atleast_1d(np.asarray(s_values, dtype=float))
        out = []
        for t in self._tiers:
            edges = t["edges"]
            zmax = edges[-1]
            vals = np.empty((s_values.size, 4, 2, order + 1, edges.size))
            slopes = np.empty_like(vals)
            c = s_values[:, None] * t["gains"][None, :]  # (S, 4)
            for e, L in enumerate(t["links"]):
                m = L["m"]
                x_nodes = c[:, :, None, None] * L["u_nodes"][None, None]
                panel = (scaled_one_minus_mgf(x_nodes, m, order) * L["wpz"]).sum(axis=-1)
                # beyond the grid only the leading power of x survives
                n = np.arange(order + 1)
                lead = np.where(n == 0, 1.0, (-1.0) ** (n + 1) * poch(m, n) / float(m) ** n)
                cn = (c[..., None] * L["base"]) ** np.maximum(n, 1)  # (S, 4, order+1)
                beyond = lead * cn * L["p_end"] * zmax ** (2 - np.maximum(n, 1) * L["alpha"]) / (
                    np.maximum(n, 1) * L["alpha"] - 2)
                beyond = np.moveaxis(beyond, -1, 0)  # (order+1, S, 4)
                vals[:, :, e] = np.moveaxis(tables.running_to_infinity(panel, beyond), 0, 2)
                x_edges = c[:, :, None] * L["u_edges"][None, None]
                slopes[:, :, e] = np.moveaxis(-scaled_one_minus_mgf(x_edges, m, order) * L["pz_edges"], 0, 2)
            out.append((vals, slopes))
        return out

    @staticmethod
    def _tail(edges, vals, slopes, z):
        """Evaluate tail tables at ``z`` (last axis); ``inf`` maps to zero."""
        finite = np.isfinite(z)
        zq = np.where(finite, z, edges[-1])
        res = tables.hermite(edges, vals, slopes, zq)
        return np.where(finite, res, 0.0)

    def scaled_log_laplace(self, tabs, serving_link: LinkType, r: float, pointing):
        """``q[n, s, d] = s^n d^n/ds^n Q`` for UE beam elevations ``pointing[d]``."""
        pointing = np.atleast_1d(np.asarray(pointing, dtype=float))
        params = self.network.channel
        theta = self.theta_az
        q = None
        for t, (vals, slopes) in zip(self._tiers, tabs):
            h = t["height"]
            edges = t["edges"]
            z_in, z_out = ring_radii(pointing, h, self.theta_el)
            for e, L in enumerate(t["links"]):
                z_eq = float(exclusion_radius(self.scheme, r, serving_link, L["link"], h, params))
                # query points per footprint: 0 z_eq, 1 max(in,eq), 2 max(out,eq), 3 min(in,eq), 4 z_in
                pts = np.stack([np.full_like(z_in, z_eq), np.maximum(z_in, z_eq), np.maximum(z_out, z_eq),
                                np.minimum(z_in, z_eq), z_in])  # (5, D)
                v = vals[:, :, e]  # (S, 4, N+1, G)
                sl = slopes[:, :, e]
                T = self._tail(edges, v[..., None, :], sl[..., None, :], pts[None, None, None])
                # T: (S, 4, N+1, 5, D)
                with np.errstate(invalid="ignore"):
                    inside_int = np.where(pts[2] > pts[1], T[..., 1, :] - T[..., 2, :], 0.0)
                    sector_gap = np.where(pts[4] > pts[3], T[..., 3, :] - T[..., 4, :], 0.0)
                full = T[..., 0, :]
                beyond_out = T[..., 2, :]
                dens = t["dens"][None, :, None, None]
                term_in = -theta * dens * inside_int
                term_out = -dens * ((2 * math.pi - theta) * full + theta * (sector_gap + beyond_out))
                contrib = np.where(np.array([True, False, True, False])[None, :, None, None],
                                   term_in, term_out).sum(axis=1)  # (S, N+1, D)
                q = contrib if q is None else q + contrib
        return np.moveaxis(q, 1, 0)  # (N+1, S, D)

    def log_laplace(self, s: float, ctx: ServingContext, order: int = 0) -> np.ndarray:
        """Scaled derivatives ``[Q, s Q', ..., s^order Q^(order)]`` at one context."""
        tabs = self.tables([s], order)
        pointing = ctx.elevation_angle + ctx.ue_elevation_error
        return self.scaled_log_laplace(tabs, ctx.link, ctx.distance, [pointing])[:, 0, 0]

    def coverage(self, s_values, serving_link: LinkType, r: float, pointing, check: bool = True):
        """Conditional coverage ``sum_t (-s)^t/t! d^t[e^{-s sigma^2} L(s)]`` on an (S, D) grid."""
        s_values = np.atleast_1d(np.asarray(s_values, dtype=float))
        order = self.network.channel.m(serving_link) - 1
        tabs = self.tables(s_values, order)
        q = self.scaled_log_laplace(tabs, serving_link, r, pointing)
        a = _with_noise(q, s_values[:, None], self.network.channel.noise_power)
        if check:
            _check_partial_sums(a)
        return np.clip(coverage_from_log_derivatives(a), 0.0, 1.0)


def laplace_transform(s: float, ctx: ServingContext, network: NetworkConfig,
                      scheme: AssociationScheme | None = None) -> float:
    return math.exp(log_laplace(s, ctx, network, scheme))


def coverage_derivative_sum(s: float, ctx: ServingContext, network: NetworkConfig,
                            scheme: AssociationScheme | None = None, t_max: int | None = None,
                            engine: LaplaceEngine | None = None) -> float:
    """Coverage given the typical-link state, for Gamma(m) fading on that link.

    ``t_max`` defaults to ``m - 1`` of the serving link type.
    """
    engine = engine or LaplaceEngine(network, scheme)
    if t_max is None:
        t_max = network.channel.m(ctx.link) - 1
    if t_max < 0:
        raise ValueError("t_max must be non-negative")
    q = engine.log_laplace(s, ctx, order=t_max)
    a = _with_noise(q, s, network.channel.noise_power)
    _check_partial_sums(a[:, None])
    return float(np.clip(coverage_from_log_derivatives(a), 0.0, 1.0))
