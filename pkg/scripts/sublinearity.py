"""Regret/T of convex D-FTBL over a doubling sequence of horizons.

    python scripts/sublinearity.py --horizons 1000,4000,16000,64000 --seeds 20
"""

import argparse
from pathlib import Path

from dftbl.harness.config import ExperimentConfig
from dftbl.harness.output import emit_csv, emit_plotdata
from dftbl.harness.sweep import sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--n", type=int, default=5)
    ap.add_argument("--d", type=int, default=1)
    ap.add_argument("--horizons", default="1000,4000,16000,64000")
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="runs/sublinearity")
    args = ap.parse_args()

    base = ExperimentConfig(n=args.n, T=1000, learner="dftbl-convex",
                            environment={"kind": "linear", "G": 1.0, "R": 1.0},
                            delay={"kind": "fixed", "d": args.d})
    horizons = [int(T) for T in args.horizons.split(",")]
    rows = sweep(base, {"T": horizons}, seeds=range(args.seeds), workers=args.workers)
    out = Path(args.out)
    emit_csv(rows, out / "table.csv")
    emit_plotdata(rows, out / "regret.dat", "T", loglog=True)
    prev = None
    for row in rows:
        T = row.params["T"]
        ratio = row.mean_regret / T
        trend = "" if prev is None else ("  decreasing" if ratio < prev else "  NOT decreasing")
        print(f"T={T:7d} regret={row.mean_regret:10.2f} regret/T={ratio:.5f}{trend}")
        prev = ratio


if __name__ == "__main__":
    main()
