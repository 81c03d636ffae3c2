#!/usr/bin/env python3
"""Compare sampler cost across fixtures.

Each fixture is FAMILY:K with an optional comma-separated algorithm
list after an @, for example::

    cycle:20:4@iterative,rejection
    grid:6:12@iterative,hybrid

The last colon-separated field is the color count; everything before it
is the graph family spec. Reports median levels and median resample
events (restarts, for the rejection baseline) per fixture/algorithm.
"""

import argparse
import sys
from pathlib import Path

from softcolor.experiments import ExperimentSpec, run_experiment

DEFAULT_FIXTURES = ["cycle:20:4@iterative,rejection", "grid:6:12@iterative,hybrid"]


def parse_fixture(text: str) -> dict:
    spec, _, algos = text.partition("@")
    family, _, k = spec.rpartition(":")
    if not family:
        raise SystemExit(f"fixture needs FAMILY:K, got {text!r}")
    entry = {"family": family, "k": int(k)}
    if algos:
        entry["algorithms"] = algos.split(",")
    return entry


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter
    )
    parser.add_argument("fixtures", nargs="*", default=DEFAULT_FIXTURES)
    parser.add_argument("--trials", type=int, default=50)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out")
    parser.add_argument("--csv")
    args = parser.parse_args(argv)

    spec = ExperimentSpec.from_dict(
        {
            "kind": "comparison",
            "fixtures": [parse_fixture(text) for text in args.fixtures],
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
