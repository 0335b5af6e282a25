"""Command line: ``dftbl run | sweep | verify | plot``.

Outputs default to ``$DFTBL_OUTPUT_DIR`` (or the working directory) when
``--out`` is not given.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .errors import ConfigError
from .harness.config import ExperimentConfig, load_json
from .harness.game import run_game
from .harness.output import emit_csv, emit_plotdata, read_table_csv
from .harness.sweep import load_sweep_spec, sweep
from .harness.verify import SUITES, run_suite

OUTPUT_ENV = "DFTBL_OUTPUT_DIR"


def _default_out(name: str) -> Path:
    return Path(os.environ.get(OUTPUT_ENV, ".")) / name


def _seed_path(path: Path, seed: int) -> Path:
    return path.with_name(f"{path.stem}_seed{seed}{path.suffix or '.csv'}")


def cmd_run(args) -> int:
    config = ExperimentConfig.load(args.config)
    seeds = [args.seed] if args.seed is not None else config.seeds
    out = Path(args.out or config.output or _default_out("trace.csv"))
    for seed in seeds:
        trace = run_game(config, seed)
        path = out if len(seeds) == 1 else _seed_path(out, seed)
        emit_csv(trace, path)
        print(json.dumps({**trace.summary, "csv": str(path)}, default=float))
    return 0


def cmd_sweep(args) -> int:
    base, grid = load_sweep_spec(load_json(args.config))
    seeds = [int(s) for s in args.seeds.split(",")] if args.seeds else None
    rows = sweep(base, grid, seeds=seeds, workers=args.workers)
    out = Path(args.out or base.output or _default_out("sweep.csv"))
    emit_csv(rows, out)
    for row in rows:
        print(f"cell {row.cell_id} {row.param_json} mean={row.mean_regret:.6g} "
              f"std={row.std_regret:.6g} bound={row.theorem_bound:.6g}"
              + (f" ERROR {row.error}" if row.error else ""))
    return 1 if any(row.error for row in rows) else 0


def cmd_verify(args) -> int:
    results = run_suite(args.suite, tamper=args.tamper)
    ok = True
    for res in results:
        ok &= res.passed
        if args.json:
            print(json.dumps(res.to_dict()))
        else:
            status = "PASS" if res.passed else "FAIL"
            print(f"{status} {res.name}: measured={res.measured:.6g} bound={res.bound:.6g} "
                  f"ratio={res.ratio:.4g} {res.detail}")
    return 0 if ok else 1


def cmd_plot(args) -> int:
    table = read_table_csv(args.table)
    out = Path(args.out or _default_out("plot.dat"))
    emit_plotdata(table, out, args.x, loglog=args.loglog)
    print(out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dftbl", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one experiment config")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="run a grid of configs over seeds")
    p.add_argument("--config", required=True, help='JSON {"base": {...}, "grid": {...}}')
    p.add_argument("--seeds", help="comma-separated seeds overriding base.seeds")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run a property suite")
    p.add_argument("suite", choices=sorted(SUITES) + ["all"])
    p.add_argument("--tamper", type=float, default=1.0, help="scale every bound (0 must fail)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("plot", help="turn a sweep table into plot columns")
    p.add_argument("--table", required=True)
    p.add_argument("--x", required=True, help="grid parameter on the x axis, e.g. T or delay.d")
    p.add_argument("--out")
    p.add_argument("--loglog", action="store_true")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
