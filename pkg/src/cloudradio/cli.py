"""Command-line entry point.

Subcommands: run, validate, crossvalidate, list-presets.  Exit codes:
0 ok, 2 config error, 3 numerical error, 4 assertion failure (--assert).
Default output directory comes from $CLOUDRADIO_OUTPUT_DIR when set.
"""

import argparse
import json
import os
import sys
from dataclasses import replace

from .harness import (ConfigError, ExperimentConfig, PRESETS, crossvalidate,
                      load_config_file, preset_config, run, validate)
from .numerics import NumericalError

# reference expectations applied under --assert; (scheme, snr, stat) -> (lo, hi)
PRESET_CHECKS = {
    "fig-conv-zf": [
        ("conventional", "10", "mean", 1.467, 1.793),
        ("zfdpc", "10", "mean", 4.437, 5.423),
    ],
    "fig-noise": [("zfdpc", "20", "mean", 7.013, 8.571)],
    "fig-uplink": [("mmse", "10", "mean", 3.357, 4.103)],
}
CROSSVAL_LIMITS = {"tic": 0.02, "smf2": 0.02, "smf2-interf": 0.03}


def _add_overrides(p):
    p.add_argument("--preset", choices=sorted(PRESETS), help="figure preset to start from")
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--drops", type=int)
    p.add_argument("--snr-db", help="scalar or comma list, e.g. '10' or '-6,0,10,20'")
    p.add_argument("--lambda-b", type=float)
    p.add_argument("--lambda-u", type=float)
    p.add_argument("--csi-l", type=int)
    p.add_argument("--cluster-radius-km", type=float)
    p.add_argument("--smf-l", type=int)
    p.add_argument("--schemes", help="comma list of scheme names")
    p.add_argument("--log-base", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--output-dir")


def _build_config(args) -> ExperimentConfig:
    if args.config:
        cfg = load_config_file(args.config)
    elif args.preset:
        cfg = preset_config(args.preset)
    else:
        cfg = ExperimentConfig()
    updates = {}
    for field, attr in [("drops", "drops"), ("lambda_b", "lambda_b"),
                        ("lambda_u", "lambda_u"), ("csi_l", "csi_l"),
                        ("cluster_radius_km", "cluster_radius_km"), ("smf_l", "smf_l"),
                        ("log_base", "log_base"), ("seed", "seed"),
                        ("output_dir", "output_dir")]:
        val = getattr(args, field)
        if val is not None:
            updates[attr] = val
    if args.snr_db is not None:
        parts = [float(p) for p in args.snr_db.split(",")]
        updates["snr_db"] = parts if len(parts) > 1 else parts[0]
    if args.schemes is not None:
        updates["schemes"] = tuple(s.strip() for s in args.schemes.split(",") if s.strip())
    if "output_dir" not in updates and cfg.output_dir is None:
        env = os.environ.get("CLOUDRADIO_OUTPUT_DIR")
        if env:
            updates["output_dir"] = env
    return replace(cfg, **updates)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="cloudradio",
                                     description="cloud radio rate experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate a config or preset")
    _add_overrides(p_run)
    p_run.add_argument("--workers", type=int, default=1)
    p_run.add_argument("--dump-geometry", action="store_true",
                       help="write BS/UE positions of the first drops as CSV")
    p_run.add_argument("--dump-channels", action="store_true",
                       help="write channel matrices (re/im interleaved) as CSV")
    p_run.add_argument("--crossvalidate", dest="with_crossval", action="store_true",
                       help="attach analytic sup gaps for schemes that have them")
    p_run.add_argument("--assert", dest="check", action="store_true",
                       help="fail (exit 4) when preset expectations are missed")

    p_val = sub.add_parser("validate", help="check a config without running it")
    _add_overrides(p_val)

    p_x = sub.add_parser("crossvalidate", help="Monte Carlo vs analytic coverage")
    _add_overrides(p_x)
    p_x.add_argument("--samples", type=int, help="tagged-user draws per scheme")
    p_x.add_argument("--assert", dest="check", action="store_true")

    sub.add_parser("list-presets", help="show available figure presets")

    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3


def _dispatch(args) -> int:
    if args.command == "list-presets":
        for name in sorted(PRESETS):
            cfg = preset_config(name)
            snr = cfg.snr_db if not isinstance(cfg.snr_db, list) else f"{cfg.snr_db[0]:g}..{cfg.snr_db[-1]:g}"
            print(f"{name:15s} schemes={','.join(cfg.schemes)} snr={snr} drops={cfg.drops}")
        return 0

    cfg = _build_config(args)

    if args.command == "validate":
        errors, warnings = validate(cfg)
        for w in warnings:
            print(f"warning: {w}")
        if errors:
            for e in errors:
                print(f"error: {e}", file=sys.stderr)
            return 2
        print("ok")
        return 0

    if args.command == "crossvalidate":
        if args.samples:
            cfg = replace(cfg, crossval_samples=args.samples)
        report = crossvalidate(cfg)
        print(json.dumps(report, indent=2, sort_keys=True))
        if args.check:
            bad = [s for s, r in report.items() if r["sup_gap"] >= CROSSVAL_LIMITS[s]]
            if bad:
                print(f"assertion failed: sup gap too large for {', '.join(bad)}",
                      file=sys.stderr)
                return 4
        return 0

    # run
    name = args.preset or "run"
    report = run(cfg, workers=args.workers, name=name,
                 dump_geometry=args.dump_geometry, dump_channels=args.dump_channels,
                 with_crossval=args.with_crossval)
    print(report.to_json())
    if args.check:
        failures = _check_preset(name, report)
        if report.crossval:
            failures += [f"crossval sup gap too large for {s}"
                         for s, r in report.crossval.items()
                         if r["sup_gap"] >= CROSSVAL_LIMITS[s]]
        if failures:
            for f in failures:
                print(f"assertion failed: {f}", file=sys.stderr)
            return 4
    return 0


def _check_preset(name, report) -> list:
    failures = []
    for scheme, snr, stat, lo, hi in PRESET_CHECKS.get(name, []):
        try:
            value = report.summaries[scheme][snr][stat]
        except KeyError:
            failures.append(f"{scheme}@{snr}dB missing from report")
            continue
        if not lo <= value <= hi:
            failures.append(f"{scheme}@{snr}dB {stat}={value:.3f} outside [{lo}, {hi}]")
    return failures


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
