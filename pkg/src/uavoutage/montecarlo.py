"""Monte Carlo drops of the multi-tier network.

Each drop draws its own random stream from ``SeedSequence([seed, drop])``, so
a drop's outcome does not depend on which worker runs it or on the block it
is evaluated in. Drops are evaluated in padded blocks; per-drop interference
sums use a sequential cumulative sum so that padding never changes a result.

Geometry is exact: the UE beam test compares the interferer's azimuth and
elevation with the perturbed UE boresight, and each interferer's UAV beam is
tested against its own random orientation.
"""
from __future__ import annotations

import enum
import functools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channel import (AntennaPattern, LinkType, gamma_from_uniforms, los_probability,
                      los_probability_at_elevation)
from .geometry import ServingContext
from .network import AssociationScheme, NetworkConfig
from .interference import mainlobe_probability
from .quadrature import integrate_finite, integrate_semi_infinite

DEFAULT_WINDOW = 5000.0
_BLOCK = 256
# uniforms per UAV: radius, bearing, link, beam azimuth, beam elevation, then fading
_FIXED_COLS = 5


class AssociationMode(enum.Enum):
    CDAS = "cdas"
    MAPAS_STRICT = "mapas-strict"  # attenuation and path loss only
    MAPAS_FULL = "mapas-full"      # also weighted by transmit power

    @classmethod
    def for_scheme(cls, scheme: AssociationScheme) -> "AssociationMode":
        return cls.CDAS if scheme is AssociationScheme.CDAS else cls.MAPAS_STRICT


@dataclass(frozen=True)
class TierRealization:
    x: np.ndarray
    y: np.ndarray
    los: np.ndarray          # bool
    fading: np.ndarray
    beam_azimuth: np.ndarray
    beam_elevation: np.ndarray


@dataclass(frozen=True)
class NetworkRealization:
    tiers: tuple[TierRealization, ...]
    # UE azimuth, UE elevation, UAV azimuth, UAV elevation errors of the typical link
    errors: tuple[float, float, float, float]
    window_radius: float

    @property
    def size(self) -> int:
        return sum(t.x.size for t in self.tiers)


@dataclass(frozen=True)
class DropRecord:
    sinr: float
    tier_index: int
    link: LinkType
    distance: float
    case: int
    interference: float


@dataclass
class OutageEstimate:
    estimate: float
    ci_halfwidth: float
    drops: int
    seed: int
    threshold: float
    sinr: np.ndarray = field(repr=False)
    tier_index: np.ndarray = field(repr=False)
    los: np.ndarray = field(repr=False)
    distance: np.ndarray = field(repr=False)
    case: np.ndarray = field(repr=False)

    def association_frequencies(self) -> dict:
        out = {}
        for k in np.unique(self.tier_index):
            for link in LinkType:
                sel = (self.tier_index == k) & (self.los == (link is LinkType.LOS))
                out[(int(k), link)] = float(sel.mean())
        return out

    def outage_at(self, threshold: float) -> float:
        return float(np.mean(self.sinr < threshold))


def drop_rng(seed: int, drop: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), int(drop)])))


def _columns(network: NetworkConfig) -> int:
    return _FIXED_COLS + max(network.channel.m_los, network.channel.m_nlos)


def _draw_raw(network: NetworkConfig, window_radius: float, rng, allow_empty: bool = False):
    """All uniforms of one drop: per-tier counts, one row per UAV, four error uniforms."""
    mean = [t.density * math.pi * window_radius ** 2 for t in network.tiers]
    while True:
        counts = rng.poisson(mean)
        if allow_empty or counts.sum() > 0:
            break
    u = rng.random((int(counts.sum()), _columns(network)))
    return counts, u, rng.random(4)


def _errors_from_uniforms(network: NetworkConfig, u):
    m = network.misalignment
    u = np.asarray(u, dtype=float)
    return np.stack([m.ue_azimuth.from_uniform(u[..., 0]), m.ue_elevation.from_uniform(u[..., 1]),
                     m.uav_azimuth.from_uniform(u[..., 2]), m.uav_elevation.from_uniform(u[..., 3])],
                    axis=-1)


def _per_tier(network: NetworkConfig, fn) -> np.ndarray:
    return np.array([fn(t) for t in network.tiers], dtype=float)


def _fading(u_fading, los, params):
    """Unit-mean Gamma power with the shape of each UAV's link type."""
    e = np.cumsum(-np.log1p(-u_fading), axis=-1)
    return np.where(los, e[..., params.m_los - 1] / params.m_los,
                    e[..., params.m_nlos - 1] / params.m_nlos)


def sample_realization(network: NetworkConfig, window_radius: float = DEFAULT_WINDOW,
                       rng: np.random.Generator | None = None) -> NetworkRealization:
    """One network drop inside a disk of ``window_radius`` around the typical UE.

    Empty drops (no UAV at all) are redrawn.
    """
    if not window_radius > 0:
        raise ValueError("window_radius must be positive")
    rng = rng if rng is not None else np.random.default_rng()
    counts, u, err_u = _draw_raw(network, window_radius, rng)
    params = network.channel
    tiers = []
    start = 0
    for n, tier in zip(counts, network.tiers):
        v = u[start:start + n]
        start += n
        z = window_radius * np.sqrt(v[:, 0])
        phi = 2 * math.pi * v[:, 1]
        los = v[:, 2] < los_probability(z, tier.height, params)
        tiers.append(TierRealization(z * np.cos(phi), z * np.sin(phi), los,
                                     _fading(v[:, _FIXED_COLS:], los, params),
                                     2 * math.pi * v[:, 3], 0.5 * math.pi * v[:, 4]))
    errors = tuple(float(e) for e in _errors_from_uniforms(network, err_u))
    return NetworkRealization(tuple(tiers), errors, window_radius)


def _wrap(angle):
    """Signed angle difference folded into [-pi, pi)."""
    return (angle + math.pi) % (2 * math.pi) - math.pi


def uav_beam_hits(bearing_to_ue, depression, beam_azimuth, beam_elevation, width_azimuth,
                  width_elevation, periodic_elevation: bool = True):
    """Whether each UAV's main lobe covers the UE.

    ``depression`` is the angle below the horizon at which the UAV sees the UE.
    Beam elevations are uniform on ``[0, pi/2)``; with ``periodic_elevation``
    the elevation offset is measured on that interval as a circle, which makes
    the hit probability exactly ``theta_a * theta_e / pi^2`` for any position.
    """
    az_ok = np.abs(_wrap(bearing_to_ue - beam_azimuth)) <= 0.5 * width_azimuth
    off = depression - beam_elevation
    if periodic_elevation:
        quarter = 0.5 * math.pi
        off = (off + 0.5 * quarter) % quarter - 0.5 * quarter
    return az_ok & (np.abs(off) <= 0.5 * width_elevation)


class FarField:
    """Mean interference from UAVs beyond the simulation window.

    Interference from outside the window is a sum of very many tiny terms
    whose variance falls off like ``R^-4``, so each drop replaces it with its
    conditional mean given the UE boresight. The UAV-side gain enters through
    its mean ``p_tm G + (1 - p_tm) g`` and fading through its unit mean.
    """

    def __init__(self, network: NetworkConfig, window_radius: float, decades: int = 6):
        params = network.channel
        self.window_radius = window_radius
        self.edges = window_radius * np.logspace(0, decades, 40 * decades + 1)
        self.cumulative = []
        self.uav_gain = []
        for tier in network.tiers:
            def density(z, h=tier.height, tier=tier):
                total = 0.0
                for link in LinkType:
                    p = los_probability(z, h, params)
                    p = p if link is LinkType.LOS else 1 - p
                    total = total + (p * params.atten(link) * tier.tx_power
                                     * (z * z + h * h) ** (-0.5 * params.alpha(link)))
                return 2 * math.pi * tier.density * z * total
            panels = [integrate_finite(density, a, b, 1e-9, 0.0).value
                      for a, b in zip(self.edges[:-1], self.edges[1:])]
            cum = np.concatenate([[0.0], np.cumsum(panels)])
            z_end = self.edges[-1]
            beyond = 0.0
            for link in LinkType:  # link probability is flat this far out
                p = los_probability(z_end, tier.height, params)
                p = p if link is LinkType.LOS else 1 - p
                a = params.alpha(link)
                beyond += (2 * math.pi * tier.density * p * params.atten(link) * tier.tx_power
                           * z_end ** (2 - a) / (a - 2))
            self.cumulative.append(np.append(cum, cum[-1] + beyond))
            pat = tier.pattern
            p_tm = mainlobe_probability(pat)
            self.uav_gain.append(p_tm * pat.main_gain + (1 - p_tm) * pat.side_gain)
        self.ue = network.ue_pattern
        self.heights = [t.height for t in network.tiers]

    def _cdf(self, k: int, z):
        cum = self.cumulative[k]
        z = np.clip(z, self.edges[0], self.edges[-1])
        return np.interp(np.log(z), np.log(self.edges), cum[:-1])

    def total(self, k: int) -> float:
        return float(self.cumulative[k][-1])

    def mean(self, boresight_elevation):
        """Far-field mean interference for each UE boresight elevation."""
        el = np.asarray(boresight_elevation, dtype=float)
        ue = self.ue
        lo = el - 0.5 * ue.width_elevation
        hi = el + 0.5 * ue.width_elevation
        share = ue.width_azimuth / (2 * math.pi)
        out = np.zeros_like(el)
        half_pi = 0.5 * math.pi
        for k, h in enumerate(self.heights):
            # horizontal distances whose elevation lies in [lo, hi] form [z_a, z_b]
            z_a = np.where(hi >= half_pi, 0.0, np.where(hi <= 0.0, np.inf,
                           h / np.tan(np.clip(hi, 1e-12, half_pi))))
            z_b = np.where(lo <= 0.0, np.inf, np.where(lo >= half_pi, 0.0,
                           h / np.tan(np.clip(lo, 1e-12, half_pi))))
            f_a = np.where(np.isinf(z_a), self.total(k), self._cdf(k, np.minimum(z_a, 1e300)))
            f_b = np.where(np.isinf(z_b), self.total(k), self._cdf(k, np.minimum(z_b, 1e300)))
            inside = np.maximum(f_b - f_a, 0.0)
            out += self.uav_gain[k] * (ue.side_gain * self.total(k)
                                       + (ue.main_gain - ue.side_gain) * share * inside)
        return out


@functools.lru_cache(maxsize=32)
def far_field_model(network: NetworkConfig, window_radius: float) -> FarField:
    return FarField(network, window_radius)


class _Block:
    """Drops padded into (drops, UAVs) arrays, UAV positions in polar form."""

    def __init__(self, network: NetworkConfig, valid, tier, z, bearing, los, fading, beam_az,
                 beam_el, errors):
        self.valid, self.tier, self.z, self.bearing = valid, tier, z, bearing
        self.los, self.fading, self.beam_az, self.beam_el = los, fading, beam_az, beam_el
        self.errors = np.array(errors, dtype=float).reshape(valid.shape[0], 4)
        self.height = _per_tier(network, lambda t: t.height)[tier]
        self.elevation = np.arctan2(self.height, z)

    @classmethod
    def from_realizations(cls, realizations, network: NetworkConfig) -> "_Block":
        n = len(realizations)
        width = max(r.size for r in realizations)
        arrays = {k: np.zeros((n, width)) for k in ("z", "bearing", "fading", "beam_az", "beam_el")}
        valid = np.zeros((n, width), bool)
        los = np.zeros((n, width), bool)
        tier = np.zeros((n, width), np.intp)
        for i, real in enumerate(realizations):
            j = 0
            for k, t in enumerate(real.tiers):
                sl = slice(j, j + t.x.size)
                valid[i, sl], tier[i, sl], los[i, sl] = True, k, t.los
                arrays["z"][i, sl] = np.hypot(t.x, t.y)
                arrays["bearing"][i, sl] = np.arctan2(t.y, t.x)
                arrays["fading"][i, sl] = t.fading
                arrays["beam_az"][i, sl] = t.beam_azimuth
                arrays["beam_el"][i, sl] = t.beam_elevation
                j += t.x.size
        return cls(network, valid, tier, los=los, errors=[r.errors for r in realizations], **arrays)

    @classmethod
    def from_raw(cls, raws, network: NetworkConfig, window_radius: float, planted=None) -> "_Block":
        """Transform the uniforms of many drops in one vectorized pass.

        ``planted = (tier, z, los)`` puts a fixed UAV at column 0 with bearing 0.
        """
        lead = 0 if planted is None else 1
        totals = np.array([u.shape[0] for _, u, _ in raws])
        n, width = len(raws), max(int(totals.max(initial=0)) + lead, 1)
        params = network.channel
        # per-UAV fields on the flat arrays, then scattered into padded rows
        flat = (np.concatenate([v for _, v, _ in raws]) if totals.sum()
                else np.zeros((0, _columns(network))))
        flat_tier = np.concatenate([np.repeat(np.arange(c.size), c) for c, _, _ in raws])
        z_f = window_radius * np.sqrt(flat[:, 0])
        h_f = _per_tier(network, lambda t: t.height)[flat_tier]
        los_f = flat[:, 2] < los_probability_at_elevation(np.arctan2(h_f, z_f), params)
        rows = np.repeat(np.arange(n), totals)
        pos = np.concatenate([np.arange(t) for t in totals]).astype(np.intp) + lead

        def scatter(values, dtype=float):
            out = np.zeros((n, width), dtype)
            out[rows, pos] = values
            return out

        valid = scatter(True, bool)
        tier = scatter(flat_tier, np.intp)
        z = scatter(z_f)
        bearing = scatter(2 * math.pi * flat[:, 1])
        los = scatter(los_f, bool)
        fading = scatter(_fading(flat[:, _FIXED_COLS:], los_f, params))
        beam_az = scatter(2 * math.pi * flat[:, 3])
        beam_el = scatter(0.5 * math.pi * flat[:, 4])
        if planted is not None:
            k, z0, los0 = planted
            valid[:, 0], tier[:, 0], z[:, 0], bearing[:, 0] = True, k, z0, 0.0
            los[:, 0], fading[:, 0] = los0, 1.0
        errors = _errors_from_uniforms(network, np.array([e for _, _, e in raws]))
        return cls(network, valid, tier, z, bearing, los, fading, beam_az, beam_el, errors)

    def link_gain(self, network: NetworkConfig):
        """Squared 3-D distance, and attenuation times path loss, of every UAV."""
        params = network.channel
        d2 = self.z * self.z + self.height * self.height
        alpha = np.where(self.los, params.alpha_los, params.alpha_nlos)
        atten = np.where(self.los, params.atten_los, params.atten_nlos)
        return d2, atten * np.exp(-0.5 * alpha * np.log(d2))


def _association_metric(mode: AssociationMode, d2, gain, power):
    if mode is AssociationMode.CDAS:
        return -d2
    if mode is AssociationMode.MAPAS_STRICT:
        return gain
    return power * gain


def _interference(block: _Block, network: NetworkConfig, serving, power, gain,
                  periodic_elevation: bool, far: FarField | None = None):
    """Aggregate interference at the UE whose beam tracks the UAV at column ``serving``."""
    rows = np.arange(block.z.shape[0])
    ue = network.ue_pattern
    bore_az = block.bearing[rows, serving] + block.errors[:, 0]
    bore_el = block.elevation[rows, serving] + block.errors[:, 1]
    ue_hit = ((np.abs(_wrap(block.bearing - bore_az[:, None])) <= 0.5 * ue.width_azimuth)
              & (np.abs(block.elevation - bore_el[:, None]) <= 0.5 * ue.width_elevation))
    uav_hit = uav_beam_hits(block.bearing + math.pi, block.elevation, block.beam_az, block.beam_el,
                            _per_tier(network, lambda t: t.pattern.width_azimuth)[block.tier],
                            _per_tier(network, lambda t: t.pattern.width_elevation)[block.tier],
                            periodic_elevation)
    main = _per_tier(network, lambda t: t.pattern.main_gain)[block.tier]
    side = _per_tier(network, lambda t: t.pattern.side_gain)[block.tier]
    g_int = np.where(uav_hit, main, side) * np.where(ue_hit, ue.main_gain, ue.side_gain)
    keep = block.valid.copy()
    keep[rows, serving] = False
    rx = np.where(keep, power * g_int * block.fading * gain, 0.0)
    # sequential sum: trailing zero padding never changes the value
    total = np.cumsum(rx, axis=1)[:, -1]
    return total if far is None else total + far.mean(bore_el)


def _evaluate(block: _Block, network: NetworkConfig, mode: AssociationMode,
              periodic_elevation: bool = True, far: FarField | None = None):
    power = _per_tier(network, lambda t: t.tx_power)[block.tier]
    d2, gain = block.link_gain(network)
    metric = np.where(block.valid, _association_metric(mode, d2, gain, power), -np.inf)
    serving = np.argmax(metric, axis=1)
    rows = np.arange(serving.size)
    s_tier = block.tier[rows, serving]
    ue = network.ue_pattern

    def pick(fn):
        return _per_tier(network, fn)[s_tier]

    e_ua, e_ue, e_va, e_ve = block.errors.T
    uav_ok = ((np.abs(e_va) <= 0.5 * pick(lambda t: t.pattern.width_azimuth))
              & (np.abs(e_ve) <= 0.5 * pick(lambda t: t.pattern.width_elevation)))
    ue_ok = (np.abs(e_ua) <= 0.5 * ue.width_azimuth) & (np.abs(e_ue) <= 0.5 * ue.width_elevation)
    typical_gain = (np.where(uav_ok, pick(lambda t: t.pattern.main_gain),
                             pick(lambda t: t.pattern.side_gain))
                    * np.where(ue_ok, ue.main_gain, ue.side_gain))
    case = 1 + (~ue_ok).astype(int) + 2 * (~uav_ok).astype(int)
    interference = _interference(block, network, serving, power, gain, periodic_elevation, far)
    signal = power[rows, serving] * typical_gain * block.fading[rows, serving] * gain[rows, serving]
    sinr = signal / (interference + network.channel.noise_power)
    return dict(sinr=sinr, tier=s_tier, los=block.los[rows, serving],
                distance=np.sqrt(d2[rows, serving]), case=case, interference=interference)


def run_drop(realization: NetworkRealization, network: NetworkConfig,
             association_mode: AssociationMode | None = None,
             periodic_elevation: bool = True, far_field: bool = True) -> DropRecord:
    """SINR and association of the typical UE for one realization."""
    if realization.size == 0:
        raise ValueError("empty realization: resample")
    mode = association_mode or AssociationMode.for_scheme(network.scheme)
    far = far_field_model(network, realization.window_radius) if far_field else None
    out = _evaluate(_Block.from_realizations([realization], network), network, mode,
                    periodic_elevation, far)
    return DropRecord(float(out["sinr"][0]), int(out["tier"][0]),
                      LinkType.LOS if out["los"][0] else LinkType.NLOS,
                      float(out["distance"][0]), int(out["case"][0]),
                      float(out["interference"][0]))


def _run_range(args):
    network, mode, window, seed, start, stop, periodic, use_far = args
    far = far_field_model(network, window) if use_far else None
    parts = []
    for lo in range(start, stop, _BLOCK):
        raws = [_draw_raw(network, window, drop_rng(seed, i))
                for i in range(lo, min(stop, lo + _BLOCK))]
        parts.append(_evaluate(_Block.from_raw(raws, network, window), network, mode, periodic,
                               far))
    return {key: np.concatenate([p[key] for p in parts]) for key in parts[0]}


def simulate_drops(network: NetworkConfig, n_drops: int, seed: int = 0,
                   window_radius: float = DEFAULT_WINDOW,
                   association_mode: AssociationMode | None = None, workers: int = 1,
                   periodic_elevation: bool = True, far_field: bool = True) -> dict:
    """Per-drop arrays (sinr, tier, los, distance, case, interference) in drop order."""
    if n_drops < 1:
        raise ValueError("n_drops must be at least 1")
    if not window_radius > 0:
        raise ValueError("window_radius must be positive")
    mode = association_mode or AssociationMode.for_scheme(network.scheme)
    workers = max(1, int(workers))
    bounds = np.linspace(0, n_drops, workers + 1).astype(int)
    jobs = [(network, mode, window_radius, seed, int(a), int(b), periodic_elevation, far_field)
            for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
    if len(jobs) == 1:
        parts = [_run_range(jobs[0])]
    else:
        with ProcessPoolExecutor(max_workers=min(len(jobs), os.cpu_count() or 1)) as pool:
            parts = list(pool.map(_run_range, jobs))
    return {key: np.concatenate([p[key] for p in parts]) for key in parts[0]}


def estimate_outage(network: NetworkConfig, threshold: float | None = None,
                    n_drops: int = 100_000, window_radius: float = DEFAULT_WINDOW,
                    rng_seed: int = 0, association_mode: AssociationMode | None = None,
                    workers: int = 1, periodic_elevation: bool = True,
                    far_field: bool = True) -> OutageEstimate:
    """Fraction of drops whose SINR falls below ``threshold`` (linear)."""
    threshold = network.sinr_threshold if threshold is None else threshold
    out = simulate_drops(network, n_drops, rng_seed, window_radius, association_mode, workers,
                         periodic_elevation, far_field)
    p = int(np.count_nonzero(out["sinr"] < threshold)) / n_drops
    return OutageEstimate(p, 1.96 * math.sqrt(p * (1 - p) / n_drops), n_drops, rng_seed,
                          threshold, out["sinr"], out["tier"], out["los"], out["distance"],
                          out["case"])


def truncation_bound(network: NetworkConfig, window_radius: float = DEFAULT_WINDOW) -> float:
    """Mean interference from UAVs outside the window, at the largest possible gain."""
    params = network.channel
    ue = network.ue_pattern
    total = 0.0
    for tier in network.tiers:
        g = tier.pattern.main_gain * ue.main_gain
        for link in LinkType:
            def f(z, h=tier.height, link=link, tier=tier):
                p = los_probability(z, h, params)
                p = p if link is LinkType.LOS else 1 - p
                return (2 * math.pi * tier.density * p * z * params.atten(link) * tier.tx_power * g
                        * (z * z + h * h) ** (-0.5 * params.alpha(link)))
            total += integrate_semi_infinite(f, window_radius, 1e-6, 0.0,
                                             decay_hint=params.alpha(link) - 1).value
    return total


def conditional_interference(network: NetworkConfig, ctx: ServingContext, n: int, seed: int = 0,
                             window_radius: float = DEFAULT_WINDOW,
                             association_mode: AssociationMode | None = None,
                             ue_azimuth_error: float = 0.0,
                             periodic_elevation: bool = True,
                             far_field: bool = True) -> np.ndarray:
    """Interference samples given the serving UAV's tier, link, distance and UE elevation error.

    The serving UAV is planted at horizontal distance ``sqrt(r^2 - H^2)``;
    interferers that would have won the association are removed.
    """
    mode = association_mode or AssociationMode.for_scheme(network.scheme)
    h_s = network.tiers[ctx.tier_index].height
    planted = (ctx.tier_index, math.sqrt(max(0.0, ctx.distance ** 2 - h_s ** 2)),
               ctx.link is LinkType.LOS)
    power_by_tier = _per_tier(network, lambda t: t.tx_power)
    far = far_field_model(network, window_radius) if far_field else None
    out = np.empty(n)
    for lo in range(0, n, _BLOCK):
        hi = min(n, lo + _BLOCK)
        raws = [_draw_raw(network, window_radius, drop_rng(seed, i), allow_empty=True)
                for i in range(lo, hi)]
        block = _Block.from_raw(raws, network, window_radius, planted)
        block.errors[:] = (ue_azimuth_error, ctx.ue_elevation_error, 0.0, 0.0)
        power = power_by_tier[block.tier]
        d2, gain = block.link_gain(network)
        metric = _association_metric(mode, d2, gain, power)
        block.valid &= ~(metric > metric[:, :1])
        out[lo:hi] = _interference(block, network, np.zeros(hi - lo, np.intp), power, gain,
                                   periodic_elevation, far)
    return out


def empirical_laplace(interference: np.ndarray, s) -> np.ndarray:
    s = np.atleast_1d(np.asarray(s, dtype=float))
    return np.exp(-np.outer(s, interference)).mean(axis=1)


def conditional_coverage_mc(network: NetworkConfig, ctx: ServingContext, gain: float,
                            interference: np.ndarray, seed: int = 0) -> float:
    """Coverage of a link with fixed gain against sampled interference, fading drawn afresh."""
    params = network.channel
    tier = network.tiers[ctx.tier_index]
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), 0xC0FE])))
    m = params.m(ctx.link)
    h = gamma_from_uniforms(rng.random((interference.size, m)), m)
    signal = (tier.tx_power * params.atten(ctx.link) * gain * h
              * ctx.distance ** -params.alpha(ctx.link))
    return float(np.mean(signal / (interference + params.noise_power) > network.sinr_threshold))


def mainlobe_fraction(pattern: AntennaPattern, n: int, seed: int = 0, height: float = 150.0,
                      window_radius: float = DEFAULT_WINDOW,
                      periodic_elevation: bool = True) -> float:
    """Share of randomly placed, randomly oriented UAVs whose main lobe covers the UE."""
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), n])))
    u = rng.random((n, 4))
    z = window_radius * np.sqrt(u[:, 0])
    hits = uav_beam_hits(2 * math.pi * u[:, 1] + math.pi, np.arctan2(height, z),
                         2 * math.pi * u[:, 2], 0.5 * math.pi * u[:, 3], pattern.width_azimuth,
                         pattern.width_elevation, periodic_elevation)
    return float(hits.mean())
