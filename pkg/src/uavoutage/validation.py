"""Cross-validation of the analytical engine against Monte Carlo drops.

Each check reports a margin (tolerance minus observed discrepancy). A check
whose own sampling noise is comparable to its tolerance is marked
inconclusive instead of failed, so a tiny drop budget cannot produce a
spurious failure.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import LinkType
from .geometry import ServingContext
from .interference import LaplaceEngine, alignment_cases, mainlobe_probability
from .montecarlo import (OutageEstimate, conditional_interference, estimate_outage,
                         mainlobe_fraction)
from .network import AssociationScheme, NetworkConfig
from .outage import case_probabilities, laplace_argument, outage_probability
from .quadrature import integrate_finite
from .serving import LINKS, association_table, serving_pdf, upper_radius

OUTAGE_TOL = 0.03
TV_TOL = 0.02
LAPLACE_TOL = 0.01
MAINLOBE_TOL = 0.002
TV_BINS = 50

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


@dataclass(frozen=True)
class Check:
    name: str
    observed: float      # discrepancy
    tolerance: float
    noise: float         # 95% sampling half-width of the discrepancy
    detail: str = ""

    @property
    def margin(self) -> float:
        return self.tolerance - self.observed

    @property
    def status(self) -> str:
        if self.noise >= self.tolerance:
            return INCONCLUSIVE
        return PASS if self.observed <= self.tolerance else FAIL

    def line(self) -> str:
        return (f"[{self.status.upper():>12}] {self.name}: |diff|={self.observed:.4g} "
                f"tol={self.tolerance:.4g} margin={self.margin:+.4g} noise95={self.noise:.3g}"
                + (f"  ({self.detail})" if self.detail else ""))


def outage_check(network: NetworkConfig, estimate: OutageEstimate, label: str) -> Check:
    analytical = outage_probability(network).value
    return Check(f"outage {label}", abs(analytical - estimate.estimate), OUTAGE_TOL,
                 estimate.ci_halfwidth,
                 f"analytical={analytical:.4f} mc={estimate.estimate:.4f}")


def analytical_histogram(network: NetworkConfig, edges) -> np.ndarray:
    """Probability that the serving 3-D distance falls in each bin, summed over cells."""
    out = np.zeros(len(edges) - 1)
    for k in range(len(network.tiers)):
        for link in LINKS:
            def f(r, k=k, link=link):
                return serving_pdf(network.scheme, k, link, r, network)
            for i, (a, b) in enumerate(zip(edges[:-1], edges[1:])):
                out[i] += integrate_finite(f, a, b, 1e-7, 1e-12).value
    return out


def serving_distance_edges(network: NetworkConfig, bins: int = TV_BINS) -> np.ndarray:
    """Equal-width bins from the lowest tier to where every serving density vanishes."""
    r_max = max(upper_radius(network.scheme, k, link, network, floor=1e-9)
                for k in range(len(network.tiers)) for link in LINKS)
    return np.linspace(network.tiers[0].height, r_max, bins + 1)


def total_variation(samples, network: NetworkConfig, bins: int = TV_BINS) -> tuple[float, float]:
    """TV distance between the sample histogram and the analytical bin masses.

    Samples beyond the last edge count in an overflow bin. Also returns the
    expected TV of a perfect sampler, used as the noise level.
    """
    edges = serving_distance_edges(network, bins)
    p = analytical_histogram(network, edges)
    p = np.append(p, max(0.0, 1.0 - p.sum()))
    counts = np.histogram(samples, bins=np.append(edges, np.inf))[0]
    q = counts / samples.size
    noise = 0.5 * float(np.sum(np.sqrt(2 * p * (1 - p) / (math.pi * samples.size))))
    return 0.5 * float(np.abs(p - q).sum()), 2 * noise


def association_check(network: NetworkConfig, estimate: OutageEstimate, label: str) -> Check:
    table = association_table(network)
    freq = estimate.association_frequencies()
    n = estimate.drops
    worst, where = 0.0, ""
    for cell, p in table.items():
        sigma = math.sqrt(max(p * (1 - p), 1.0 / n) / n)
        dev = abs(freq.get(cell, 0.0) - p)
        if dev / sigma > worst:
            worst, where = dev / sigma, f"tier {cell[0]} {cell[1].value}"
    # expressed in standard deviations; pass within 3
    return Check(f"association frequencies {label}", worst, 3.0, 0.0, f"worst cell {where}")


def case_check(network: NetworkConfig, estimate: OutageEstimate, label: str) -> Check:
    table = association_table(network)
    expected = np.zeros(4)
    for (k, _), p in table.items():
        expected += p * np.array(case_probabilities(network.misalignment, network.ue_pattern,
                                                    network.tiers[k].pattern))
    observed = np.bincount(estimate.case - 1, minlength=4)[:4] / estimate.drops
    sigma = np.sqrt(np.maximum(expected * (1 - expected), 1.0 / estimate.drops) / estimate.drops)
    z = float(np.max(np.abs(observed - expected) / sigma))
    return Check(f"typical-link gain cases {label}", z, 3.0, 0.0,
                 "expected " + ", ".join(f"{e:.4f}" for e in expected))


def laplace_points(network: NetworkConfig):
    """Serving states and arguments used for the Laplace spot checks."""
    params = network.channel
    tier = network.tiers[0]
    g1 = alignment_cases(tier.pattern, network.ue_pattern)[0].combined_gain
    pts = []
    for r in (1.5 * tier.height, 3.0 * tier.height):
        s = float(laplace_argument(network.sinr_threshold, r, tier.tx_power, g1, LinkType.LOS,
                                   params))
        pts.append((ServingContext(0, LinkType.LOS, r, tier.height, 0.0), s))
    return pts


def laplace_checks(network: NetworkConfig, samples: int, seed: int,
                   simulated: NetworkConfig | None = None) -> list[Check]:
    engine = LaplaceEngine(network)
    out = []
    for i, (ctx, s) in enumerate(laplace_points(network)):
        interference = conditional_interference(simulated or network, ctx, samples, seed=seed + i)
        values = np.exp(-s * interference)
        mc = float(values.mean())
        noise = 1.96 * float(values.std(ddof=1)) / math.sqrt(samples)
        analytical = math.exp(float(engine.log_laplace(s, ctx)[0]))
        out.append(Check(f"Laplace transform {network.scheme.value} r={ctx.distance:g} m",
                         abs(mc - analytical), LAPLACE_TOL, noise,
                         f"s={s:.3g} analytical={analytical:.4f} mc={mc:.4f}"))
    return out


def mainlobe_checks(network: NetworkConfig, draws: int, seed: int) -> list[Check]:
    out = []
    for k, tier in enumerate(network.tiers):
        pat = tier.pattern
        frac = mainlobe_fraction(pat, draws, seed=seed + k, height=tier.height)
        p = mainlobe_probability(pat)
        out.append(Check(f"UAV main-lobe probability tier {k}", abs(frac - p), MAINLOBE_TOL,
                         1.96 * math.sqrt(p * (1 - p) / draws), f"p_tm={p:.5f} mc={frac:.5f}"))
    return out


def run_battery(network: NetworkConfig, drops: int, seed: int = 0,
                schemes=(AssociationScheme.MAPAS, AssociationScheme.CDAS),
                mc_network=None, window_radius: float = 5000.0, workers: int = 1,
                laplace_samples: int | None = None, log=print) -> list[Check]:
    """Every cross-validation check for ``network``.

    ``mc_network`` replaces the network on the simulation side only, which is
    how fault injection is exercised.
    """
    mc_network = mc_network or (lambda net: net)
    checks = []

    def emit(c: Check):
        checks.append(c)
        if log:
            log(c.line())

    for scheme in schemes:
        base = network.replace(scheme=scheme)
        for label, net in (("imperfect", base), ("perfect", base.perfectly_aligned())):
            est = estimate_outage(mc_network(net), n_drops=drops, window_radius=window_radius,
                                  rng_seed=seed, workers=workers)
            tag = f"{scheme.value} {label}"
            emit(outage_check(net, est, tag))
            if label == "imperfect":
                tv, noise = total_variation(est.distance, net)
                emit(Check(f"serving-distance TV {scheme.value}", tv, TV_TOL, noise))
                emit(association_check(net, est, tag))
                emit(case_check(net, est, tag))
        for c in laplace_checks(base, laplace_samples or min(drops, 20_000), seed,
                                simulated=mc_network(base)):
            emit(c)
    for c in mainlobe_checks(network, 1_000_000, seed):
        emit(c)
    return checks


def summary(checks) -> tuple[int, int, int]:
    statuses = [c.status for c in checks]
    return statuses.count(PASS), statuses.count(FAIL), statuses.count(INCONCLUSIVE)
