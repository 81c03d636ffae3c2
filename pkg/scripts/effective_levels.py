#!/usr/bin/env python3
"""Count how many schedule levels actually trigger repair work.

Sweeps the iterative sampler over a set of schedule bases and records
the median number of effective levels (levels where at least one vertex
was bad) against the total visited, which shows how much of a fine
schedule is skipped for free.
"""

import argparse
import sys
from pathlib import Path

from softcolor.experiments import ExperimentSpec, run_experiment


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--family", default="grid:5")
    parser.add_argument("--k", type=int, default=20)
    parser.add_argument("--bases", type=float, nargs="+", default=[0.99, 0.95, 0.9])
    parser.add_argument("--trials", type=int, default=50)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out")
    parser.add_argument("--csv")
    args = parser.parse_args(argv)

    spec = ExperimentSpec.from_dict(
        {
            "kind": "effective-levels",
            "family": args.family,
            "k": args.k,
            "bases": args.bases,
            "trials": args.trials,
            "seed": args.seed,
        }
    )
    report = run_experiment(spec)
    if args.out:
        Path(args.out).write_text(report.to_json(), encoding="utf-8")
    else:
        sys.stdout.write(report.to_json())
    if args.csv:
        Path(args.csv).write_text(report.to_csv(), encoding="utf-8")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
