"""Command-line front end.

Subcommands ``analyze``, ``simulate`` and ``sweep`` write a CSV plus a JSON
manifest; ``validate`` prints the cross-validation report. Exit status is 0
on success, 1 when a validation check fails and 2 for configuration errors.
"""
from __future__ import annotations

import argparse
import sys

from .experiment import ConfigError, load_config, mc_network, run, spec_from_dict
from .validation import FAIL, run_battery, summary

EXIT_OK, EXIT_VALIDATION, EXIT_CONFIG = 0, 1, 2

_FORCED_ENGINE = {"analyze": "analytical", "simulate": "mc"}


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="uavoutage",
                                     description="Outage probability of multi-tier UAV networks.")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {"analyze": "analytical outage over the configured sweep",
             "simulate": "Monte Carlo outage over the configured sweep",
             "sweep": "run the configured sweep with the chosen engine(s)",
             "validate": "cross-check the analytical engine against simulation"}
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", help="YAML or JSON config, or a run manifest")
        p.add_argument("--seed", type=_u64, help="Monte Carlo seed")
        p.add_argument("--drops", type=_positive, help="Monte Carlo drops per point")
        p.add_argument("--out", help="CSV output path")
        p.add_argument("--engine", choices=("analytical", "mc", "both"),
                       help="engine(s) to run (analyze and simulate fix their own)")
        p.add_argument("--workers", type=_positive, help="worker processes")
        p.add_argument("--no-wall-time", action="store_true",
                       help="leave wall_time_s empty so reruns are byte-identical")
    return parser


def _load(args):
    spec = load_config(args.config) if args.config else spec_from_dict({})
    engine = _FORCED_ENGINE.get(args.command, args.engine)
    spec = spec.with_overrides(seed=args.seed, drops=args.drops, out=args.out, engine=engine,
                               workers=args.workers)
    if args.no_wall_time:
        raw = dict(spec.raw)
        raw["output"] = {**raw["output"], "record_wall_time": False}
        spec = spec_from_dict(raw, resolved=True)
    return spec


def _validate(spec) -> int:
    print(f"validating against {spec.mc.drops} drops per point, seed {spec.mc.seed}")
    checks = run_battery(spec.base, spec.mc.drops, spec.mc.seed, schemes=spec.schemes,
                         mc_network=lambda net: mc_network(spec, net),
                         window_radius=spec.mc.window_m, workers=spec.mc.workers)
    passed, failed, inconclusive = summary(checks)
    print(f"{passed} passed, {failed} failed, {inconclusive} inconclusive")
    return EXIT_VALIDATION if any(c.status == FAIL for c in checks) else EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = _load(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.command == "validate":
        return _validate(spec)
    rows, csv_path, manifest_path = run(spec)
    errors = [r for r in rows if r["error"]]
    for r in errors:
        print(f"row {r['sweep_value']} {r['scheme']} {r['alignment']} {r['engine']}: {r['error']}",
              file=sys.stderr)
    print(f"wrote {len(rows)} rows to {csv_path} (manifest {manifest_path})")
    return EXIT_OK

