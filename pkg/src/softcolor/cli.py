"""Command line front end.

Subcommands:

* ``sample``: draw proper colorings and emit them as canonical JSON
  records (or plain text).
* ``analyze``: print the closed-form planning quantities for a degree
  bound and color budget.
* ``verify``: run a seeded uniformity check of a sampler against exact
  enumeration on a small instance.
* ``components``: measure resampling-set structure on fresh reference
  draws across a gamma grid.
* ``bench``: execute an experiment spec file and write the report.

Exit codes: 0 success, 2 bad parameters or malformed input, 3 budget
exhausted, 4 instance too large for an exact method, 5 verification
rejected. The thread default honors the SOFTCOLOR_THREADS environment
variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import analysis
from .errors import (
    BudgetExhaustedError,
    CapacityError,
    FormatError,
    ParameterError,
    SolverTimeoutError,
)
from .experiments import ExperimentSpec, run_component_structure, run_experiment
from .graph import Graph, load_edge_list, parse_family
from .hybrid import HybridConfig, run_adaptive_gamma, sample_hybrid
from .prs import sample_iterative, sample_recursive
from .records import ColoringRecord, serialize
from .rng import RandomStream
from .softstate import GammaSchedule
from .solvers import SolverKind
from .verify import uniformity_test

__all__ = ["main", "build_parser"]

EXIT_OK = 0
EXIT_PARAMETER = 2
EXIT_BUDGET = 3
EXIT_CAPACITY = 4
EXIT_REJECTED = 5

SOLVER_CHOICES = tuple(kind.value for kind in SolverKind)


def _default_threads() -> int:
    raw = os.environ.get("SOFTCOLOR_THREADS", "").strip()
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise ParameterError(f"SOFTCOLOR_THREADS must be an integer, got {raw!r}")
    if value < 1:
        raise ParameterError("SOFTCOLOR_THREADS must be at least 1")
    return value


def _load_graph(args) -> tuple[Graph, dict]:
    if getattr(args, "edge_list", None):
        path = Path(args.edge_list)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ParameterError(f"cannot read edge list {path}: {exc}")
        graph = load_edge_list(text, label=path.name)
        descriptor = {
            "source": "edge-list", "path": str(path),
            "n": graph.n, "edges": graph.edge_count,
        }
    else:
        graph = parse_family(args.family, seed=getattr(args, "graph_seed", 0))
        descriptor = {
            "source": "family", "family": args.family,
            "n": graph.n, "edges": graph.edge_count,
        }
    return graph, descriptor


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    return int.from_bytes(os.urandom(8), "big")


def _write_output(args, payload: bytes):
    if getattr(args, "out", None):
        Path(args.out).write_bytes(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.buffer.flush()


def _cmd_sample(args) -> int:
    graph, descriptor = _load_graph(args)
    seed = _resolve_seed(args)
    threads = args.threads if args.threads is not None else _default_threads()
    schedule = GammaSchedule(args.gamma_base)
    algo_info = {
        "name": "adaptive" if args.adaptive else args.algo,
        "solver": args.solver,
        "gamma_base": args.gamma_base,
        "depth": args.depth,
        "threads": threads,
    }
    print(
        "config: "
        + " ".join(f"{key}={value}" for key, value in algo_info.items())
        + f" seed={seed} graph={graph.label} n={graph.n} k={args.k}",
        file=sys.stderr,
    )
    chunks = []
    for index in range(args.samples):
        stream = RandomStream(seed).child(index)
        if args.adaptive or args.algo == "hybrid":
            config = HybridConfig(
                solver=SolverKind(args.solver),
                threads=threads,
                depth=args.depth,
                schedule=schedule,
                max_levels=args.max_levels,
                max_inner_sweeps=args.max_sweeps,
            )
            runner = run_adaptive_gamma if args.adaptive else sample_hybrid
            result = runner(graph, args.k, stream, config)
        elif args.algo == "iterative":
            result = sample_iterative(
                graph, args.k, stream, schedule,
                max_levels=args.max_levels,
                max_sweeps_per_level=args.max_sweeps,
            )
        else:
            result = sample_recursive(
                graph, args.k, stream, schedule,
                max_levels=args.max_levels,
                max_sweeps_per_level=args.max_sweeps,
            )
        if args.format == "json":
            record = ColoringRecord(
                n=graph.n,
                k=args.k,
                colors=result.coloring,
                graph=descriptor,
                seed=seed,
                algorithm={**algo_info, "index": index},
                stats=result.stats.to_dict(),
            )
            chunks.append(serialize(record))
        else:
            chunks.append((" ".join(str(c) for c in result.coloring) + "\n").encode())
    _write_output(args, b"".join(chunks))
    return EXIT_OK


def _cmd_analyze(args) -> int:
    delta = args.delta
    report = {
        "delta": delta,
        "k": args.k,
        "gamma_base": args.gamma_base,
        "gamma_critical": analysis.gamma_critical(delta) if delta >= 3 else None,
        "k_sufficient": analysis.k_sufficient(delta) if delta >= 3 else None,
        "effective_level_count": (
            analysis.effective_level_count(args.gamma_base, delta)
            if delta >= 3
            else None
        ),
    }
    if args.k:
        gammas = args.gammas or [args.gamma_base]
        per_gamma = []
        for gamma in gammas:
            entry = {
                "gamma": gamma,
                "alpha": analysis.alpha(gamma, delta, args.k),
                "p_bad": analysis.p_bad_regular(gamma, delta, args.k),
                "p_passive": analysis.p_passive(gamma, delta),
                "lll_margin": analysis.lll_margin(gamma, delta, args.k),
            }
            if args.n:
                entry["expected_bad"] = analysis.expected_bad_regular(
                    args.n, gamma, delta, args.k
                )
            try:
                entry["percolation_decay_rate"] = analysis.percolation_decay_rate(
                    gamma, delta
                )
                entry["expected_cluster_size"] = analysis.expected_cluster_size(
                    gamma, delta
                )
            except ParameterError:
                entry["percolation_decay_rate"] = None
                entry["expected_cluster_size"] = None
            per_gamma.append(entry)
        report["per_gamma"] = per_gamma
    payload = (json.dumps(report, sort_keys=True, separators=(",", ":")) + "\n").encode()
    _write_output(args, payload)
    return EXIT_OK


def _cmd_verify(args) -> int:
    graph, _ = _load_graph(args)
    seed = _resolve_seed(args)
    threads = args.threads if args.threads is not None else _default_threads()
    schedule = GammaSchedule(args.gamma_base)

    def sampler(g, k, stream):
        if args.algo == "iterative":
            return sample_iterative(g, k, stream, schedule).coloring
        if args.algo == "recursive":
            return sample_recursive(g, k, stream, schedule).coloring
        config = HybridConfig(
            solver=SolverKind(args.solver), threads=threads, schedule=schedule
        )
        return sample_hybrid(g, k, stream, config).coloring

    print(
        f"config: algo={args.algo} solver={args.solver} runs={args.runs} "
        f"seed={seed} graph={graph.label} k={args.k}",
        file=sys.stderr,
    )
    report = uniformity_test(sampler, graph, args.k, args.runs, RandomStream(seed))
    payload = (
        json.dumps(report.to_dict(), sort_keys=True, separators=(",", ":")) + "\n"
    ).encode()
    _write_output(args, payload)
    return EXIT_REJECTED if report.rejected_at_1pct else EXIT_OK


def _cmd_components(args) -> int:
    seed = _resolve_seed(args)
    threads = args.threads if args.threads is not None else _default_threads()
    spec = ExperimentSpec(
        kind="component-structure",
        family=args.family,
        k=args.k,
        gammas=tuple(args.gammas),
        trials=args.trials,
        seed=seed,
        threads=threads,
    )
    report = run_component_structure(spec)
    if args.format == "json":
        payload = report.to_json().encode()
    elif args.format == "csv":
        payload = report.to_csv().encode()
    else:
        lines = [
            f"{'gamma':>8} {'avg_bad':>10} {'avg_set':>10} {'avg_comp':>10} "
            f"{'max_comp':>8} {'avg_max':>10}"
        ]
        for row in report.rows:
            lines.append(
                f"{row['gamma']:>8.4f} {row['avg_bad']:>10.3f} "
                f"{row['avg_set_size']:>10.3f} {row['avg_components']:>10.3f} "
                f"{row['max_components']:>8d} {row['avg_max_component']:>10.3f}"
            )
        payload = ("\n".join(lines) + "\n").encode()
    _write_output(args, payload)
    return EXIT_OK


def _cmd_bench(args) -> int:
    path = Path(args.spec)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParameterError(f"cannot read spec {path}: {exc}")
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"malformed spec JSON: {exc.msg}", position=exc.pos)
    spec = ExperimentSpec.from_dict(payload)
    report = run_experiment(spec)
    if args.out:
        Path(args.out).write_text(report.to_json(), encoding="utf-8")
    else:
        sys.stdout.write(report.to_json())
    if args.csv:
        Path(args.csv).write_text(report.to_csv(), encoding="utf-8")
    return EXIT_OK


def _add_graph_arguments(sub, with_edge_list=True):
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--family", help="graph family spec, e.g. cycle:20 or grid:5")
    if with_edge_list:
        group.add_argument("--edge-list", help="path to a whitespace edge list file")
    sub.add_argument(
        "--graph-seed", type=int, default=0,
        help="seed for randomized families (default 0)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="softcolor",
        description="Exact uniform sampling of proper colorings by soft-constraint resampling.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sample = sub.add_parser("sample", help="draw proper colorings")
    _add_graph_arguments(p_sample)
    p_sample.add_argument("--k", type=int, required=True, help="number of colors")
    p_sample.add_argument(
        "--algo", choices=("iterative", "recursive", "hybrid"), default="hybrid"
    )
    p_sample.add_argument("--solver", choices=SOLVER_CHOICES, default="nrs")
    p_sample.add_argument("--gamma-base", type=float, default=0.9)
    p_sample.add_argument("--depth", type=int, default=0)
    p_sample.add_argument("--threads", type=int, default=None)
    p_sample.add_argument("--seed", type=int, default=None)
    p_sample.add_argument("--samples", type=int, default=1)
    p_sample.add_argument("--adaptive", action="store_true",
                          help="experimental adaptive level scheduling")
    p_sample.add_argument("--max-levels", type=int, default=None,
                          help="schedule level budget before giving up "
                               "(default: deep enough for the base)")
    p_sample.add_argument("--max-sweeps", type=int, default=100_000,
                          help="per-level resampling round budget")
    p_sample.add_argument("--format", choices=("json", "text"), default="json")
    p_sample.add_argument("--out", help="output path (default stdout)")
    p_sample.set_defaults(func=_cmd_sample)

    p_analyze = sub.add_parser("analyze", help="closed-form planning quantities")
    p_analyze.add_argument("--delta", type=int, required=True, help="max degree")
    p_analyze.add_argument("--k", type=int, default=0)
    p_analyze.add_argument("--n", type=int, default=0)
    p_analyze.add_argument("--gamma-base", type=float, default=0.9)
    p_analyze.add_argument("--gammas", type=float, nargs="*", default=None)
    p_analyze.add_argument("--out", help="output path (default stdout)")
    p_analyze.set_defaults(func=_cmd_analyze)

    p_verify = sub.add_parser("verify", help="seeded uniformity check")
    _add_graph_arguments(p_verify)
    p_verify.add_argument("--k", type=int, required=True)
    p_verify.add_argument(
        "--algo", choices=("iterative", "recursive", "hybrid"), default="hybrid"
    )
    p_verify.add_argument("--solver", choices=SOLVER_CHOICES, default="nrs")
    p_verify.add_argument("--gamma-base", type=float, default=0.9)
    p_verify.add_argument("--runs", type=int, required=True)
    p_verify.add_argument("--threads", type=int, default=None)
    p_verify.add_argument("--seed", type=int, default=None)
    p_verify.add_argument("--out", help="output path (default stdout)")
    p_verify.set_defaults(func=_cmd_verify)

    p_components = sub.add_parser("components", help="resampling-set structure")
    p_components.add_argument("--family", required=True)
    p_components.add_argument("--k", type=int, required=True)
    p_components.add_argument("--gammas", type=float, nargs="+", required=True)
    p_components.add_argument("--trials", type=int, default=20)
    p_components.add_argument("--threads", type=int, default=None)
    p_components.add_argument("--seed", type=int, default=None)
    p_components.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p_components.add_argument("--out", help="output path (default stdout)")
    p_components.set_defaults(func=_cmd_components)

    p_bench = sub.add_parser("bench", help="run an experiment spec file")
    p_bench.add_argument("--spec", required=True, help="path to a JSON experiment spec")
    p_bench.add_argument("--out", help="report JSON path (default stdout)")
    p_bench.add_argument("--csv", help="also write aggregate rows as CSV")
    p_bench.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParameterError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMETER
    except (BudgetExhaustedError, SolverTimeoutError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY


if __name__ == "__main__":
    sys.exit(main())
