"""Outage probability under beamsteering errors.

The typical link's gain case depends on four independent pointing errors. The
UAV errors and the UE azimuth error enter only through the probability of
staying inside the main lobe. The UE elevation error also moves the UE beam's
footprint on every tier, so it is integrated numerically: one main-lobe
window and two side-lobe tails, each split wherever the footprint changes form
and integrated with fixed Gauss-Legendre rules.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .channel import AntennaPattern, ChannelParams, LinkType
from .interference import LaplaceEngine, alignment_cases, exclusion_radius
from .network import AssociationScheme, MisalignmentModel, NetworkConfig, UniformError
from .quadrature import QuadratureResult
from .serving import LINKS, integrate_over_r, serving_pdf

DELTA_NODES = 16
_GL_X, _GL_W = np.polynomial.legendre.leggauss(DELTA_NODES)


def case_probabilities(model: MisalignmentModel, ue_pattern: AntennaPattern,
                       uav_pattern: AntennaPattern) -> tuple[float, float, float, float]:
    """Probabilities of the four typical-link gain cases.

    Case 1 is main lobe at both ends, 2 UAV main and UE side, 3 UAV side and UE
    main, 4 side lobes at both ends.
    """
    uav = (model.uav_azimuth.within(0.5 * uav_pattern.width_azimuth)
           * model.uav_elevation.within(0.5 * uav_pattern.width_elevation))
    ue = (model.ue_azimuth.within(0.5 * ue_pattern.width_azimuth)
          * model.ue_elevation.within(0.5 * ue_pattern.width_elevation))
    return uav * ue, uav * (1 - ue), (1 - uav) * ue, (1 - uav) * (1 - ue)


def laplace_argument(threshold: float, r: float, tx_power: float, gain, link: LinkType,
                     params: ChannelParams):
    """``s`` such that ``P(SINR > T) = P(h > s (I + noise))`` for unit-mean Gamma(m) fading ``h``.

    With ``h ~ Gamma(m, 1/m)``, ``m h`` is a unit-scale Gamma(m) variable, so
    the shape ``m`` multiplies the threshold.
    """
    m = params.m(link)
    return m * threshold * r ** params.alpha(link) / (tx_power * params.atten(link) * np.asarray(gain))


@dataclass(frozen=True)
class DeltaRule:
    """Quadrature nodes over the UE elevation error, main window and tails kept apart."""

    main_nodes: np.ndarray
    main_weights: np.ndarray
    tail_nodes: np.ndarray
    tail_weights: np.ndarray


def _gauss_on(a: float, b: float, err: UniformError):
    x = 0.5 * (a + b) + 0.5 * (b - a) * _GL_X
    return x, 0.5 * (b - a) * _GL_W * err.pdf(x)


def delta_rule(err: UniformError, half_width: float, kinks=()) -> DeltaRule:
    """Split the error support at the main-lobe edges and at ``kinks``."""
    if err.degenerate:
        d = np.array([err.low])
        one, none = np.ones(1), np.zeros(0)
        if abs(err.low) <= half_width:
            return DeltaRule(d, one, none, none)
        return DeltaRule(none, none, d, one)
    lo, hi = err.support
    windows = {"main": [(max(lo, -half_width), min(hi, half_width))],
               "tail": [(lo, min(hi, -half_width)), (max(lo, half_width), hi)]}
    out = {}
    for name, spans in windows.items():
        xs, ws = [], []
        for a, b in spans:
            if not a < b:
                continue
            cuts = sorted({a, b, *(k for k in kinks if a < k < b)})
            for c0, c1 in zip(cuts[:-1], cuts[1:]):
                x, w = _gauss_on(c0, c1, err)
                xs.append(x)
                ws.append(w)
        out[name] = (np.concatenate(xs), np.concatenate(ws)) if xs else (np.zeros(0), np.zeros(0))
    return DeltaRule(*out["main"], *out["tail"])


@dataclass
class OutageResult:
    value: float
    error_estimate: float
    cells: dict = field(default_factory=dict)  # (tier, link) -> coverage contribution
    converged: bool = True

    def __float__(self) -> float:
        return self.value


class OutageEvaluator:
    """Conditional and total coverage for one network and association scheme."""

    def __init__(self, network: NetworkConfig, scheme: AssociationScheme | None = None):
        self.network = network
        self.scheme = scheme or network.scheme
        self.engine = LaplaceEngine(network, self.scheme)
        self.ue = network.ue_pattern

    def _kinks(self, r: float, link: LinkType, beta: float):
        """UE elevation errors where some footprint limit changes form."""
        th = self.ue.width_elevation
        half = 0.5 * th
        pts = [half, 0.5 * math.pi - half, -half]
        params = self.network.channel
        for tier in self.network.tiers:
            for other in LINKS:
                z_eq = float(exclusion_radius(self.scheme, r, link, other, tier.height, params))
                if z_eq > 0:
                    ang = math.atan2(tier.height, z_eq)
                    pts += [ang - half, ang + half]
        return [p - beta for p in pts]

    def conditional_coverage(self, tier_index: int, link: LinkType, r: float) -> float:
        net = self.network
        model = net.misalignment
        tier = net.tiers[tier_index]
        params = net.channel
        beta = math.asin(min(1.0, tier.height / r))
        uav = tier.pattern
        omega_v = (model.uav_azimuth.within(0.5 * uav.width_azimuth)
                   * model.uav_elevation.within(0.5 * uav.width_elevation))
        omega_ua = model.ue_azimuth.within(0.5 * self.ue.width_azimuth)
        rule = delta_rule(model.ue_elevation, 0.5 * self.ue.width_elevation,
                          self._kinks(r, link, beta))
        gains = np.array([c.combined_gain for c in alignment_cases(uav, self.ue)])
        s = laplace_argument(net.sinr_threshold, r, tier.tx_power, gains, link, params)
        # weight of each case j on main-window and tail nodes
        main_w = np.array([omega_v * omega_ua, omega_v * (1 - omega_ua),
                           (1 - omega_v) * omega_ua, (1 - omega_v) * (1 - omega_ua)])
        tail_w = np.array([0.0, omega_v, 0.0, 1 - omega_v])
        deltas = np.concatenate([rule.main_nodes, rule.tail_nodes])
        n_main = rule.main_nodes.size
        dw = np.concatenate([rule.main_weights, rule.tail_weights])
        case_w = np.concatenate([np.repeat(main_w[:, None], n_main, axis=1),
                                 np.repeat(tail_w[:, None], deltas.size - n_main, axis=1)], axis=1)
        weights = case_w * dw[None, :]  # (4, D)
        used = np.flatnonzero(weights.any(axis=1))
        if used.size == 0 or deltas.size == 0:
            return 0.0
        cov = self.engine.coverage(s[used], link, r, beta + deltas)
        return float(math.fsum((weights[used] * cov).ravel()))

    def coverage_cell(self, tier_index: int, link: LinkType, rel_tol: float = 1e-5,
                      abs_tol: float = 1e-9) -> QuadratureResult:
        def integrand(r):
            r = np.atleast_1d(r)
            pdf = serving_pdf(self.scheme, tier_index, link, r, self.network)
            out = np.zeros_like(r)
            for i, (ri, fi) in enumerate(zip(r, pdf)):
                if fi > 0:
                    out[i] = fi * self.conditional_coverage(tier_index, link, float(ri))
            return out
        return integrate_over_r(integrand, self.scheme, tier_index, link, self.network,
                                rel_tol=rel_tol, abs_tol=abs_tol)

    def outage(self, rel_tol: float = 1e-5) -> OutageResult:
        cells = {}
        err = 0.0
        ok = True
        for k in range(len(self.network.tiers)):
            for link in LINKS:
                res = self.coverage_cell(k, link, rel_tol=rel_tol)
                cells[(k, link)] = res.value
                err += res.error_estimate
                ok &= res.converged
        value = min(1.0, max(0.0, 1.0 - math.fsum(cells.values())))
        return OutageResult(value, err, cells, ok)


def conditional_coverage_given_r(tier_index: int, link: LinkType, r: float,
                                 network: NetworkConfig,
                                 scheme: AssociationScheme | None = None) -> float:
    """Coverage given association to ``(tier, link)`` at 3-D distance ``r``."""
    return OutageEvaluator(network, scheme).conditional_coverage(tier_index, link, r)


def outage_probability(network: NetworkConfig, scheme: AssociationScheme | None = None,
                       rel_tol: float = 1e-5) -> OutageResult:
    return OutageEvaluator(network, scheme).outage(rel_tol)


def perfect_alignment_outage(network: NetworkConfig, scheme: AssociationScheme | None = None,
                             rel_tol: float = 1e-5) -> OutageResult:
    """Outage with every pointing error fixed at zero."""
    return outage_probability(network.perfectly_aligned(), scheme, rel_tol)
