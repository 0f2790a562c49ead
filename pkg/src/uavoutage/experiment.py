"""Configuration files, parameter sweeps, CSV output and run manifests.

A configuration is a YAML (or JSON) mapping. Every physical quantity carries
its unit in the key name, and anything omitted falls back to the reference
two-tier dense-urban setup::

    network:
      sinr_threshold_db: 0
      ue_antennas: 4
      noise_power_dbw: -130
      channel: {alpha_los: 2.5, alpha_nlos: 4.0, atten_los_linear: 1.0,
                atten_nlos_linear: 0.01, m_los: 3, m_nlos: 1, env_a: 11.95, env_b: 0.136}
      tiers:
        - {height_m: 150, density_per_m2: 1.0e-5, power_dbw: 0, uav_antennas: 9}
        - {height_m: 200, density_per_m2: 1.0e-5, power_dbw: 2, uav_antennas: 9}
      misalignment: {uav_error_max_deg: 22.5, ue_error_max_deg: 15}
    sweep: {axis: uav_antennas, values: [1, 4, 9, 16, 25, 36, 49, 64]}
    schemes: [MAPAS, CDAS]
    alignment: [imperfect, perfect]
    engine: both
    mc: {drops: 100000, seed: 0, window_m: 5000, association_mode: default, workers: 1}
    output: {csv: outage.csv, record_wall_time: true}
"""
from __future__ import annotations

import copy
import csv
import io
import json
import math
import os
import platform
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
import yaml

from .channel import ChannelParams
from .montecarlo import AssociationMode, estimate_outage, truncation_bound
from .network import (AssociationScheme, MisalignmentModel, NetworkConfig, TierConfig,
                      db_to_linear)
from .outage import outage_probability

CSV_COLUMNS = ("sweep_value", "scheme", "alignment", "engine", "outage", "ci_halfwidth",
               "quad_error", "wall_time_s")
SWEEP_AXES = ("sinr_threshold_db", "uav_antennas", "tier_density_per_m2", "tier_height_m",
              "misalignment_range_deg")
ENGINES = ("analytical", "mc", "both")
ALIGNMENTS = ("imperfect", "perfect")
MANIFEST_VERSION = 1


class ConfigError(ValueError):
    """Invalid configuration; ``field`` names the offending key path."""

    def __init__(self, field_path: str, message: str):
        super().__init__(f"{field_path}: {message}")
        self.field = field_path
        self.message = message


DEFAULTS = {
    "network": {
        "sinr_threshold_db": 0.0,
        "ue_antennas": 4,
        "noise_power_dbw": -130.0,
        "channel": {"alpha_los": 2.5, "alpha_nlos": 4.0, "atten_los_linear": 1.0,
                    "atten_nlos_linear": 0.01, "m_los": 3, "m_nlos": 1,
                    "env_a": 11.95, "env_b": 0.136},
        "tiers": [
            {"height_m": 150.0, "density_per_m2": 1e-5, "power_dbw": 0.0, "uav_antennas": 9},
            {"height_m": 200.0, "density_per_m2": 1e-5, "power_dbw": 2.0, "uav_antennas": 9},
        ],
        "misalignment": {"uav_error_max_deg": 22.5, "ue_error_max_deg": 15.0},
    },
    "sweep": None,
    "schemes": ["MAPAS", "CDAS"],
    "alignment": ["imperfect", "perfect"],
    "engine": "analytical",
    "mc": {"drops": 100_000, "seed": 0, "window_m": 5000.0, "association_mode": "default",
           "workers": 1, "channel_overrides": {}},
    "output": {"csv": "outage.csv", "record_wall_time": True},
}


def _merge(base: dict, update: dict, path: str = "") -> dict:
    out = copy.deepcopy(base)
    for key, value in update.items():
        where = f"{path}.{key}" if path else key
        if key not in base:
            raise ConfigError(where, "unknown key")
        if isinstance(base[key], dict) and base[key] and isinstance(value, dict):
            out[key] = _merge(base[key], value, where)
        else:
            out[key] = copy.deepcopy(value)
    return out


def _number(value, where: str, integer: bool = False) -> float:
    if isinstance(value, str):
        # YAML 1.1 reads exponent literals without a dot, like 1e-5, as strings
        try:
            value = float(value) if any(c in value for c in ".eEnN") else int(value)
        except ValueError:
            pass
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(where, f"expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(where, "must be finite")
    if integer and int(value) != value:
        raise ConfigError(where, f"expected an integer, got {value!r}")
    return int(value) if integer else float(value)


def _channel(raw: dict, noise_dbw: float, where: str) -> ChannelParams:
    names = {"alpha_los": "alpha_los", "alpha_nlos": "alpha_nlos",
             "atten_los_linear": "atten_los", "atten_nlos_linear": "atten_nlos",
             "m_los": "m_los", "m_nlos": "m_nlos", "env_a": "env_a", "env_b": "env_b"}
    kwargs = {}
    for key, value in raw.items():
        if key not in names:
            raise ConfigError(f"{where}.{key}", "unknown key")
        kwargs[names[key]] = _number(value, f"{where}.{key}", integer=key.startswith("m_"))
    try:
        return ChannelParams(noise_power=float(db_to_linear(noise_dbw)), **kwargs)
    except ValueError as exc:
        raise ConfigError(where, str(exc)) from None


def network_from_dict(raw: dict, scheme: AssociationScheme = AssociationScheme.MAPAS,
                      where: str = "network") -> NetworkConfig:
    """Build a validated network from the ``network`` section (defaults already merged)."""
    channel = _channel(raw["channel"], _number(raw["noise_power_dbw"], f"{where}.noise_power_dbw"),
                       f"{where}.channel")
    tiers_raw = raw["tiers"]
    if not isinstance(tiers_raw, list) or not tiers_raw:
        raise ConfigError(f"{where}.tiers", "need a non-empty list of tiers")
    tier_keys = {"height_m", "density_per_m2", "power_dbw", "uav_antennas"}
    tiers = []
    for i, t in enumerate(tiers_raw):
        tw = f"{where}.tiers[{i}]"
        if not isinstance(t, dict):
            raise ConfigError(tw, "expected a mapping")
        for key in set(t) - tier_keys:
            raise ConfigError(f"{tw}.{key}", "unknown key")
        for key in tier_keys - set(t):
            raise ConfigError(f"{tw}.{key}", "missing")
        try:
            tiers.append(TierConfig(
                height=_number(t["height_m"], f"{tw}.height_m"),
                density=_number(t["density_per_m2"], f"{tw}.density_per_m2"),
                tx_power=float(db_to_linear(_number(t["power_dbw"], f"{tw}.power_dbw"))),
                uav_antennas=_number(t["uav_antennas"], f"{tw}.uav_antennas", integer=True)))
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(tw, str(exc)) from None
    mis = raw["misalignment"]
    mw = f"{where}.misalignment"
    uav_max = _number(mis.get("uav_error_max_deg"), f"{mw}.uav_error_max_deg")
    ue_max = _number(mis.get("ue_error_max_deg"), f"{mw}.ue_error_max_deg")
    for key, value in (("uav_error_max_deg", uav_max), ("ue_error_max_deg", ue_max)):
        if not 0 <= value <= 90:
            raise ConfigError(f"{mw}.{key}", "must lie in [0, 90] degrees")
    misalignment = MisalignmentModel.symmetric(math.radians(uav_max), math.radians(ue_max))
    try:
        return NetworkConfig(
            tiers=tuple(tiers), channel=channel,
            ue_antennas=_number(raw["ue_antennas"], f"{where}.ue_antennas", integer=True),
            misalignment=misalignment,
            sinr_threshold=float(db_to_linear(_number(raw["sinr_threshold_db"],
                                                      f"{where}.sinr_threshold_db"))),
            scheme=scheme)
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(where, str(exc)) from None


@dataclass(frozen=True)
class McOptions:
    drops: int = 100_000
    seed: int = 0
    window_m: float = 5000.0
    association_mode: str = "default"
    workers: int = 1
    channel_overrides: dict = field(default_factory=dict)

    def mode(self, scheme: AssociationScheme) -> AssociationMode:
        if self.association_mode == "default":
            return AssociationMode.for_scheme(scheme)
        return AssociationMode(self.association_mode)


@dataclass(frozen=True)
class ExperimentSpec:
    """A fully resolved run: base network, one sweep axis, engines and MC options."""

    raw: dict = field(repr=False)
    base: NetworkConfig
    sweep_axis: str
    sweep_values: tuple
    schemes: tuple[AssociationScheme, ...]
    alignments: tuple[str, ...]
    engine: str
    mc: McOptions
    csv_path: Path
    record_wall_time: bool = True

    @property
    def engines(self) -> tuple[str, ...]:
        return ("analytical", "mc") if self.engine == "both" else (self.engine,)

    def with_overrides(self, seed=None, drops=None, out=None, engine=None,
                       workers=None) -> "ExperimentSpec":
        raw = copy.deepcopy(self.raw)
        if seed is not None:
            raw["mc"]["seed"] = seed
        if drops is not None:
            raw["mc"]["drops"] = drops
        if workers is not None:
            raw["mc"]["workers"] = workers
        if out is not None:
            raw["output"]["csv"] = str(out)
        if engine is not None:
            raw["engine"] = engine
        return spec_from_dict(raw, resolved=True)


def _sweep_values(sweep, base: dict):
    if sweep is None:
        return "sinr_threshold_db", (float(base["network"]["sinr_threshold_db"]),)
    if not isinstance(sweep, dict) or set(sweep) != {"axis", "values"}:
        raise ConfigError("sweep", "expected a mapping with exactly 'axis' and 'values'")
    axis = sweep["axis"]
    if axis not in SWEEP_AXES:
        raise ConfigError("sweep.axis", f"one of {', '.join(SWEEP_AXES)}")
    values = sweep["values"]
    if not isinstance(values, list) or not values:
        raise ConfigError("sweep.values", "sweep values must be a non-empty list")
    out = []
    for i, v in enumerate(values):
        where = f"sweep.values[{i}]"
        if isinstance(v, list):
            if axis not in ("tier_height_m", "misalignment_range_deg", "tier_density_per_m2"):
                raise ConfigError(where, f"axis {axis} takes scalar values")
            out.append(tuple(_number(x, where) for x in v))
        else:
            out.append(_number(v, where, integer=(axis == "uav_antennas")))
    return axis, tuple(out)


def spec_from_dict(raw: dict, resolved: bool = False) -> ExperimentSpec:
    """Validate a configuration mapping; raises :class:`ConfigError` naming the field."""
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "configuration must be a mapping")
    if "manifest_version" in raw:
        raw = raw["config"]
    merged = copy.deepcopy(raw) if resolved else _merge(DEFAULTS, raw)
    try:
        schemes = tuple(AssociationScheme(s.upper()) for s in merged["schemes"])
    except (ValueError, AttributeError):
        raise ConfigError("schemes", "entries must be MAPAS or CDAS") from None
    if not schemes:
        raise ConfigError("schemes", "at least one scheme is required")
    alignments = tuple(merged["alignment"])
    if not alignments or any(a not in ALIGNMENTS for a in alignments):
        raise ConfigError("alignment", "entries must be 'imperfect' or 'perfect'")
    if merged["engine"] not in ENGINES:
        raise ConfigError("engine", f"one of {', '.join(ENGINES)}")
    base = network_from_dict(merged["network"], schemes[0])
    axis, values = _sweep_values(merged["sweep"], merged)
    mc_raw = merged["mc"]
    drops = _number(mc_raw["drops"], "mc.drops", integer=True)
    if drops < 1:
        raise ConfigError("mc.drops", "must be at least 1")
    seed = _number(mc_raw["seed"], "mc.seed", integer=True)
    if not 0 <= seed < 2 ** 64:
        raise ConfigError("mc.seed", "must be an unsigned 64-bit integer")
    window = _number(mc_raw["window_m"], "mc.window_m")
    if window <= 0:
        raise ConfigError("mc.window_m", "must be positive")
    workers = _number(mc_raw["workers"], "mc.workers", integer=True)
    if workers < 1:
        raise ConfigError("mc.workers", "must be at least 1")
    mode = mc_raw["association_mode"]
    if mode != "default" and mode not in {m.value for m in AssociationMode}:
        raise ConfigError("mc.association_mode",
                          "default, " + ", ".join(m.value for m in AssociationMode))
    overrides = mc_raw.get("channel_overrides") or {}
    _channel({**merged["network"]["channel"], **overrides}, -130.0, "mc.channel_overrides")
    mc = McOptions(drops, seed, window, mode, workers, dict(overrides))
    spec = ExperimentSpec(merged, base, axis, values, schemes, alignments, merged["engine"], mc,
                          Path(merged["output"]["csv"]),
                          bool(merged["output"]["record_wall_time"]))
    for v in values:  # every sweep point must build a valid network
        point_network(spec, v)
    return spec


def load_config(path) -> ExperimentSpec:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError("<file>", f"cannot read {path}: {exc.strerror}") from None
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError("<file>", f"not valid YAML: {exc}") from None
    return spec_from_dict(raw if raw is not None else {})


def point_network(spec: ExperimentSpec, value) -> NetworkConfig:
    """Base network with the sweep axis set to ``value``."""
    net = spec.base
    axis = spec.sweep_axis
    where = "sweep.values"
    try:
        if axis == "sinr_threshold_db":
            return net.replace(sinr_threshold=float(db_to_linear(value)))
        if axis == "uav_antennas":
            return net.with_uav_antennas(int(value))
        if axis == "tier_density_per_m2":
            dens = value if isinstance(value, tuple) else (value,) * len(net.tiers)
            if len(dens) != len(net.tiers):
                raise ConfigError(where, "one density per tier")
            return net.replace(tiers=tuple(replace(t, density=d) for t, d in zip(net.tiers, dens)))
        if axis == "tier_height_m":
            hs = value if isinstance(value, tuple) else (value,) * len(net.tiers)
            if len(hs) != len(net.tiers):
                raise ConfigError(where, "one height per tier")
            return net.with_heights(hs)
        uav_max, ue_max = (value if isinstance(value, tuple)
                           else (value, spec.raw["network"]["misalignment"]["ue_error_max_deg"]))
        if not (0 <= uav_max <= 90 and 0 <= ue_max <= 90):
            raise ConfigError(where, "error ranges must lie in [0, 90] degrees")
        return net.replace(misalignment=MisalignmentModel.symmetric(math.radians(uav_max),
                                                                    math.radians(ue_max)))
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(where, f"{value!r}: {exc}") from None


def format_value(value) -> str:
    if isinstance(value, tuple):
        return "/".join(format_value(v) for v in value)
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def _fmt(x) -> str:
    return "" if x is None else repr(float(x))


def mc_network(spec: ExperimentSpec, net: NetworkConfig) -> NetworkConfig:
    if not spec.mc.channel_overrides:
        return net
    ch = {**spec.raw["network"]["channel"], **spec.mc.channel_overrides}
    return net.replace(channel=_channel(ch, spec.raw["network"]["noise_power_dbw"], "mc"))


def _task(args):
    """One CSV row; failures become a row-level error marker."""
    spec, value, scheme, alignment, engine = args
    start = time.perf_counter()
    row = {"sweep_value": format_value(value), "scheme": scheme.value, "alignment": alignment,
           "engine": engine, "outage": None, "ci_halfwidth": None, "quad_error": None}
    error = None
    try:
        net = point_network(spec, value).replace(scheme=scheme)
        if alignment == "perfect":
            net = net.perfectly_aligned()
        if engine == "analytical":
            res = outage_probability(net)
            row["outage"], row["quad_error"] = res.value, res.error_estimate
            if not res.converged:
                error = "quadrature did not reach its tolerance"
        else:
            est = estimate_outage(mc_network(spec, net), n_drops=spec.mc.drops,
                                  window_radius=spec.mc.window_m, rng_seed=spec.mc.seed,
                                  association_mode=spec.mc.mode(scheme), workers=spec.mc.workers)
            row["outage"], row["ci_halfwidth"] = est.estimate, est.ci_halfwidth
    except Exception as exc:  # noqa: BLE001 - reported per row, run continues
        error = f"{type(exc).__name__}: {exc}"
    row["wall_time_s"] = time.perf_counter() - start
    row["error"] = error
    return row


def run_rows(spec: ExperimentSpec, workers: int = 1) -> list[dict]:
    """Evaluate every (sweep value, scheme, alignment, engine) row in sweep order."""
    tasks = [(spec, v, s, a, e) for v in spec.sweep_values for s in spec.schemes
             for a in spec.alignments for e in spec.engines]
    analytic = [t for t in tasks if t[4] == "analytical"]
    results = {}
    if workers > 1 and len(analytic) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(analytic))) as pool:
            for t, row in zip(analytic, pool.map(_task, analytic)):
                results[id(t)] = row
    for t in tasks:
        if id(t) not in results:
            results[id(t)] = _task(t)
    return [results[id(t)] for t in tasks]


def rows_to_csv(rows, record_wall_time: bool = True) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        outage = "ERROR" if row.get("error") and row["outage"] is None else _fmt(row["outage"])
        writer.writerow([row["sweep_value"], row["scheme"], row["alignment"], row["engine"], outage,
                         _fmt(row["ci_halfwidth"]), _fmt(row["quad_error"]),
                         f"{row['wall_time_s']:.3f}" if record_wall_time else ""])
    return buf.getvalue()


def manifest(spec: ExperimentSpec, rows) -> dict:
    from . import __version__
    bounds = {}
    if "mc" in spec.engines:
        for v in spec.sweep_values:
            bounds[format_value(v)] = truncation_bound(point_network(spec, v), spec.mc.window_m)
    return {
        "manifest_version": MANIFEST_VERSION,
        "package_version": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "seed": spec.mc.seed,
        "config": spec.raw,
        "csv": str(spec.csv_path),
        "window_truncation_mean_interference_w": bounds,
        "noise_power_w": spec.base.channel.noise_power,
        "rows": [{k: row[k] for k in ("sweep_value", "scheme", "alignment", "engine",
                                      "wall_time_s", "error")} for row in rows],
    }


def manifest_path(csv_path: Path) -> Path:
    return csv_path.with_name(csv_path.name + ".manifest.json")


def run(spec: ExperimentSpec, workers: int | None = None) -> tuple[list[dict], Path, Path]:
    """Evaluate the spec, then write the CSV and its manifest next to it."""
    rows = run_rows(spec, workers if workers is not None else spec.mc.workers)
    path = spec.csv_path
    if path.parent and not path.parent.exists():
        os.makedirs(path.parent, exist_ok=True)
    path.write_text(rows_to_csv(rows, spec.record_wall_time))
    mpath = manifest_path(path)
    mpath.write_text(json.dumps(manifest(spec, rows), indent=2, sort_keys=True, default=str) + "\n")
    return rows, path, mpath
