#!/usr/bin/env python3
"""Fit level count against instance size.

Instantiates a templated family (the literal ``{n}`` is replaced by
each size), runs one sampler over it, and fits median levels visited
against log n. The slope lands in the report meta.

Pick ``--algorithm hybrid --solver huber`` for families whose repair
halo can swallow the whole graph at small gamma (random regular
graphs, say); the flat iterative sampler degenerates to whole-graph
rejection there and will exhaust its sweep budget once n is large.
"""

import argparse
import sys
from pathlib import Path

from softcolor.experiments import ExperimentSpec, run_experiment


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--family", default="cycle:{n}", help="template with {n}")
    parser.add_argument("--k", type=int, default=5)
    parser.add_argument("--sizes", type=int, nargs="+", default=[50, 100, 200, 400])
    parser.add_argument("--trials", type=int, default=30)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument(
        "--algorithm", default="iterative",
        choices=["iterative", "recursive", "hybrid", "rejection"],
    )
    parser.add_argument("--solver", default="nrs", choices=["nrs", "huber", "cftp-sweep"])
    parser.add_argument("--out")
    parser.add_argument("--csv")
    args = parser.parse_args(argv)

    spec = ExperimentSpec.from_dict(
        {
            "kind": "level-growth",
            "family": args.family,
            "k": args.k,
            "sizes": args.sizes,
            "trials": args.trials,
            "seed": args.seed,
            "algorithms": [args.algorithm],
            "solver": args.solver,
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
