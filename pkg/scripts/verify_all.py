"""Run every property suite and print a one-line verdict per property."""

import sys

from dftbl.harness.verify import run_suite


def main():
    results = run_suite("all")
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name:28s} measured={r.measured:.4g} "
              f"bound={r.bound:.4g} {r.detail}")
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
