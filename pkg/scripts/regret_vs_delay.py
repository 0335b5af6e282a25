"""Mean regret of each learner as the maximum delay grows.

    python scripts/regret_vs_delay.py --T 20000 --seeds 10 --out runs/delay
"""

import argparse
from pathlib import Path

from dftbl.harness.config import ExperimentConfig
from dftbl.harness.output import emit_csv, emit_plotdata
from dftbl.harness.sweep import sweep

LEARNERS = ("dftbl-convex", "dftbl-doubling", "gold", "bistritz")


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--n", type=int, default=5)
    ap.add_argument("--T", type=int, default=20_000)
    ap.add_argument("--delays", default="1,16,64,256,1024")
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="runs/delay")
    args = ap.parse_args()

    out = Path(args.out)
    delays = [int(d) for d in args.delays.split(",")]
    for learner in LEARNERS:
        base = ExperimentConfig(n=args.n, T=args.T, learner=learner,
                                environment={"kind": "linear", "G": 1.0, "R": 1.0})
        rows = sweep(base, {"delay.d": delays}, seeds=range(args.seeds), workers=args.workers)
        emit_csv(rows, out / f"{learner}.csv")
        emit_plotdata(rows, out / f"{learner}.dat", "delay.d", loglog=True)
        for row in rows:
            print(f"{learner:15s} d={row.params['delay.d']:5d} regret={row.mean_regret:10.2f} "
                  f"+- {row.std_regret:8.2f}  bound={row.theorem_bound:.4g}")


if __name__ == "__main__":
    main()
