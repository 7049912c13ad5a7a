"""Command line entry point: ``vrnetsim {run,sweep,cdf,validate-config}``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from vrnetsim.errors import ConfigError
from vrnetsim.harness.config import PROFILES, ExperimentConfig, load_config, parse_config
from vrnetsim.harness.experiment import ALGORITHMS, run_experiment
from vrnetsim.harness.io import compute_cdf, emit, to_csv
from vrnetsim.harness.sweep import AXES, SWEEP_COLUMNS, sweep


def parse_seeds(text: str) -> list[int]:
    """``"3"`` -> [3]; ``"0..4"`` -> [0, 1, 2, 3, 4]; ``"1,5"`` -> [1, 5]."""
    if ".." in text:
        lo, hi = text.split("..", 1)
        lo, hi = int(lo), int(hi)
        if hi < lo:
            raise argparse.ArgumentTypeError(f"empty seed range {text!r}")
        return list(range(lo, hi + 1))
    return [int(s) for s in text.split(",") if s]


def _algorithms(text: str | None) -> list[str]:
    if not text:
        return list(ALGORITHMS)
    algos = [a.strip() for a in text.split(",") if a.strip()]
    for a in algos:
        if a not in ALGORITHMS:
            raise ConfigError("algo", f"unknown algorithm {a!r}; pick from {', '.join(ALGORITHMS)}")
    return algos


def _config(args) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else parse_config("")
    changes = {}
    if getattr(args, "profile", None):
        changes["profile"] = args.profile
    if getattr(args, "periods", None):
        changes["num_periods"] = args.periods
    if getattr(args, "iterations", None):
        changes["num_iterations"] = args.iterations
    return cfg.replace(**changes) if changes else cfg


def _seeds(args, cfg) -> list[int]:
    if args.seeds:
        return parse_seeds(args.seeds)
    return [cfg.seed if args.seed is None else args.seed]


def cmd_run(args) -> int:
    cfg = _config(args)
    records = [run_experiment(cfg, algo, s) for algo in _algorithms(args.algo)
               for s in _seeds(args, cfg)]
    out = Path(args.out)
    emit(records, "csv", out / "runs.csv")
    emit(records, "json", out / "runs.json")
    for r in records:
        print(f"{r.algorithm} seed={r.seed} total={r.total_utility:.6g} "
              f"per_user={r.per_user_utility:.6g}")
    return 0


def cmd_sweep(args) -> int:
    cfg = _config(args)
    if not args.axis or not args.values:
        raise ConfigError("axis", "sweep needs --axis and --values")
    values = [v for v in args.values.split(",") if v]
    points, records = sweep(cfg, args.axis, values, _algorithms(args.algo), _seeds(args, cfg),
                            workers=args.workers)
    out = Path(args.out)
    (out / "sweep.csv").parent.mkdir(parents=True, exist_ok=True)
    (out / "sweep.csv").write_text(to_csv([], SWEEP_COLUMNS, [p.row for p in points]),
                                   encoding="utf-8")
    emit(records, "csv", out / "runs.csv")
    for p in points:
        print(f"{p.axis}={p.value} {p.algorithm}: {p.metric} mean={p.mean:.6g} std={p.std:.6g}")
    return 0


def cmd_cdf(args) -> int:
    cfg = _config(args)
    rows = []
    for algo in _algorithms(args.algo):
        records = [run_experiment(cfg, algo, s) for s in _seeds(args, cfg)]
        rows.extend((algo, v, f) for v, f in compute_cdf(records, args.metric))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "cdf.csv").write_text(to_csv([], ("algorithm", "value", "cumulative_fraction"), rows),
                                 encoding="utf-8")
    print(f"wrote {len(rows)} CDF points to {out / 'cdf.csv'}")
    return 0


def cmd_validate(args) -> int:
    cfg = _config(args)
    print(f"ok: config hash {cfg.config_hash()} (profile {cfg.profile})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vrnetsim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, runs=True):
        p.add_argument("--config", help="INI config file (defaults if omitted)")
        p.add_argument("--profile", choices=tuple(PROFILES))
        if runs:
            p.add_argument("--algo", help="algorithm or comma list (default: all)")
            p.add_argument("--seed", type=int)
            p.add_argument("--seeds", help="N..M range or comma list")
            p.add_argument("--out", default="out")
            p.add_argument("--periods", type=int, help="override num_periods")
            p.add_argument("--iterations", type=int, help="override num_iterations")

    p = sub.add_parser("run", help="run experiments, write runs.csv and runs.json")
    common(p)
    p.set_defaults(func=cmd_run)
    p = sub.add_parser("sweep", help="sweep one axis, write sweep.csv and runs.csv")
    common(p)
    p.add_argument("--axis", choices=AXES)
    p.add_argument("--values", help="comma separated axis values")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)
    p = sub.add_parser("cdf", help="empirical CDF of a run metric, write cdf.csv")
    common(p)
    p.add_argument("--metric", default="total_utility",
                   choices=("total_utility", "per_user_utility", "mean_utility"))
    p.set_defaults(func=cmd_cdf)
    p = sub.add_parser("validate-config", help="check a config file and print its hash")
    common(p, runs=False)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
