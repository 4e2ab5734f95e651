"""Full ensemble sweep over every dimension with a known complete MUB set.

Writes one JSON report per dimension into the output directory and prints a
summary table. Example:

    python scripts/run_grid.py --trials 1000 --out results/
"""

import argparse
import json
import time
from pathlib import Path

from mubkit.mub import SUPPORTED_DIMS
from mubkit.theorems import SweepConfig, run_sweep


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dims", type=lambda s: [int(x) for x in s.split(",")], default=list(SUPPORTED_DIMS))
    parser.add_argument("--trials", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--out", type=Path, default=Path("results"))
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    print(f"{'d':>3} {'t1 max|res|':>12} {'t1-ineq min':>12} {'t2 max|res|':>12} {'eq1 min':>10} {'sec':>6}")
    for d in args.dims:
        checks = ["t1", "t1-ineq", "t2"] + (["eq1"] if d <= 4 else [])
        start = time.perf_counter()
        report = run_sweep(SweepConfig(dims=[d], trials=args.trials, seed=args.seed, checks=checks, jobs=args.jobs))
        elapsed = time.perf_counter() - start
        (args.out / f"sweep_d{d}.json").write_text(json.dumps(report.to_dict(), indent=1))
        c = report.per_dim[0]["checks"]
        eq1 = f"{c['eq1']['min_slack']:10.2e}" if "eq1" in c else f"{'-':>10}"
        print(
            f"{d:>3} {c['t1']['max_abs_residual']:12.2e} {c['t1-ineq']['min_slack']:12.2e} "
            f"{c['t2']['max_abs_residual']:12.2e} {eq1} {elapsed:6.1f}"
        )


if __name__ == "__main__":
    main()
