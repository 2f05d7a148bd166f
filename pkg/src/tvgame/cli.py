"""Command-line front end.

    tvgame run --config run.json [--T n] [--out dir]
    tvgame sweep --config sweep.json [--T n] [--out dir]
    tvgame verify --suite drvu|invariants|oracle [--seed n] [--report file]

Exit codes: 0 ok, 1 verification failure, 2 bad config, 3 dimension
mismatch, 4 solver fault.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .harness import ConfigError, RunConfig, run, sweep
from .matrix_game import DimensionError, SolverError
from .verify import SUITES, run_suite

EXIT_VERIFY, EXIT_CONFIG, EXIT_DIMENSION, EXIT_SOLVER = 1, 2, 3, 4

log = logging.getLogger("tvgame")


def _config(args) -> RunConfig:
    return RunConfig.load(args.config, T=args.T, out=args.out, stride=args.stride,
                          workers=getattr(args, "workers", None))


def cmd_run(args) -> int:
    cfg = _config(args)
    trace = run(cfg)
    final = trace.final
    print(" ".join(f"{k}={final[k]:.6g}" for k in ("t", "reg_x", "reg_y", "dyn_ne_reg", "ne_reg", "dual_gap")))
    if cfg.out:
        print(f"wrote {Path(cfg.out) / (cfg.name + '.csv')}")
    return 0


def cmd_sweep(args) -> int:
    cfg = _config(args)
    result = sweep(cfg)
    print(f"{'measure':<20}{'best single':>18}{'best value':>14}{'two-layer':>14}{'ratio':>10}")
    for name, e in result.summary["measures"].items():
        print(f"{name:<20}{e['best_single']:>18}{e['best_value']:>14.6g}{e['two_layer_value']:>14.6g}"
              f"{e['ratio']:>10.3g}")
    if cfg.out:
        print(f"wrote {Path(cfg.out) / 'summary.json'}")
    return 0


def cmd_verify(args) -> int:
    report = run_suite(args.suite, args.seed)
    d = report.to_dict()
    status = "PASS" if report.passed else "FAIL"
    print(f"{status} {args.suite}: {report.checked} checked, {report.violations} violations")
    for k, v in report.stats.items():
        print(f"  {k}: {v}")
    if args.report:
        Path(args.report).write_text(json.dumps(d, indent=2) + "\n")
    elif not report.passed:
        print(json.dumps(report.counterexample)[:2000])
    return 0 if report.passed else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tvgame", description="No-regret dynamics in time-varying zero-sum games")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (("run", cmd_run), ("sweep", cmd_sweep)):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True)
        p.add_argument("--T", type=int)
        p.add_argument("--out")
        p.add_argument("--stride", type=int)
        if name == "sweep":
            p.add_argument("--workers", type=int)
        p.set_defaults(func=fn)
    p = sub.add_parser("verify")
    p.add_argument("--suite", required=True, choices=SUITES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", help="write the full JSON report here")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, KeyError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except DimensionError as e:
        print(f"dimension mismatch: {e}", file=sys.stderr)
        return EXIT_DIMENSION
    except SolverError as e:
        print(f"solver fault: {e}", file=sys.stderr)
        return EXIT_SOLVER
    except ValueError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
