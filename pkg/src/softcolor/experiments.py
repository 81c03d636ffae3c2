"""Measurement harness for the sampler family.

Four experiment kinds cover the questions the samplers raise in
practice: how large resampling sets and their components get at a given
softness (``component-structure``), how many schedule levels actually
do work (``effective-levels``), how samplers compare on shared fixtures
(``comparison``), and how the level count grows with instance size
(``level-growth``).

Every (configuration, trial) cell draws from its own child stream, so
reports are reproducible from the spec alone and cells can run on a
thread pool without changing a single number. Reports keep the raw
per-trial records next to the aggregate rows; ``aggregate`` is a pure
function of the raw records so consumers can recheck the math.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import ParameterError
from .graph import parse_family
from .hybrid import HybridConfig, sample_hybrid
from .prs import sample_iterative, sample_recursive, sample_rejection
from .rng import TAG_CELL, RandomStream
from .softstate import GammaSchedule, bad_mask, build_resampling_set, sample_reference
from .solvers import SolverKind

__all__ = [
    "ExperimentSpec",
    "ExperimentReport",
    "aggregate",
    "run_component_structure",
    "run_effective_levels",
    "run_comparison_suite",
    "run_level_growth",
    "run_experiment",
]

KINDS = ("component-structure", "effective-levels", "comparison", "level-growth")


@dataclass(frozen=True)
class ExperimentSpec:
    """Declarative description of one experiment.

    Field use by kind:

    * component-structure: family, k, gammas, trials
    * effective-levels: family, k, bases, trials
    * comparison: fixtures (each {"family", "k", optional "algorithms",
      "solver", "gamma_base"}), trials
    * level-growth: family with an ``{n}`` placeholder, k, sizes,
      algorithm taken from the first entry of ``algorithms``
    """

    kind: str
    family: str = ""
    k: int = 0
    gammas: tuple[float, ...] = ()
    bases: tuple[float, ...] = (0.99, 0.95, 0.9)
    fixtures: tuple[dict, ...] = ()
    sizes: tuple[int, ...] = ()
    trials: int = 20
    seed: int = 0
    threads: int = 1
    solver: str = "nrs"
    gamma_base: float = 0.9
    algorithms: tuple[str, ...] = ("iterative", "hybrid")

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown experiment kind: {self.kind!r}")
        if self.trials < 1:
            raise ParameterError("trials must be at least 1")
        if self.threads < 1:
            raise ParameterError("threads must be at least 1")

    @staticmethod
    def from_dict(payload: dict) -> "ExperimentSpec":
        if not isinstance(payload, dict):
            raise ParameterError("experiment spec must be a JSON object")
        kwargs = dict(payload)
        for key in ("gammas", "bases", "sizes", "algorithms"):
            if key in kwargs:
                kwargs[key] = tuple(kwargs[key])
        if "fixtures" in kwargs:
            kwargs["fixtures"] = tuple(dict(f) for f in kwargs["fixtures"])
        unknown = set(kwargs) - {f for f in ExperimentSpec.__dataclass_fields__}
        if unknown:
            raise ParameterError(f"unknown spec fields: {sorted(unknown)}")
        return ExperimentSpec(**kwargs)

    def to_dict(self) -> dict:
        payload = asdict(self)
        payload["gammas"] = list(self.gammas)
        payload["bases"] = list(self.bases)
        payload["sizes"] = list(self.sizes)
        payload["algorithms"] = list(self.algorithms)
        payload["fixtures"] = [dict(f) for f in self.fixtures]
        return payload


@dataclass
class ExperimentReport:
    spec: dict
    rows: list
    raw: list
    meta: dict = field(default_factory=dict)

    def to_json(self) -> str:
        payload = {"spec": self.spec, "meta": self.meta, "rows": self.rows, "raw": self.raw}
        return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"

    def to_csv(self) -> str:
        if not self.rows:
            return ""
        keys = sorted({key for row in self.rows for key in row})
        out = io.StringIO()
        writer = csv.DictWriter(out, fieldnames=keys)
        writer.writeheader()
        for row in self.rows:
            writer.writerow(row)
        return out.getvalue()


def _run_cells(cells, worker, threads: int):
    results = [None] * len(cells)
    if threads == 1:
        for i, cell in enumerate(cells):
            results[i] = worker(cell)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for i, value in enumerate(pool.map(worker, cells)):
                results[i] = value
    return results


def _median(values) -> float:
    return float(np.median(np.asarray(values, dtype=float)))


def _mean(values) -> float:
    return float(np.mean(np.asarray(values, dtype=float)))


def _sampler_run(algorithm: str, graph, k, stream, base: float, solver: str):
    schedule = GammaSchedule(base)
    if algorithm == "iterative":
        return sample_iterative(graph, k, stream, schedule)
    if algorithm == "recursive":
        return sample_recursive(graph, k, stream, schedule)
    if algorithm == "hybrid":
        config = HybridConfig(solver=SolverKind(solver), schedule=schedule)
        return sample_hybrid(graph, k, stream, config)
    raise ParameterError(f"unknown algorithm: {algorithm!r}")


def _run_metrics(algorithm: str, graph, k, stream, base: float, solver: str) -> dict:
    """Uniform metric surface across samplers; the rejection baseline
    reports its draw count as resamples and redraws the whole graph."""
    if algorithm == "rejection":
        _, iterations = sample_rejection(graph, k, stream)
        return {
            "levels": 0,
            "resamples": iterations,
            "vertex_resamples": iterations * graph.n,
        }
    result = _sampler_run(algorithm, graph, k, stream, base, solver)
    return {
        "levels": result.stats.levels_visited,
        "resamples": result.stats.resample_events,
        "vertex_resamples": result.stats.vertex_resamples,
    }


def run_component_structure(spec: ExperimentSpec) -> ExperimentReport:
    """Fresh reference draws probed at each gamma: how many vertices are
    bad, how big the resampling set is, and how it splits."""
    if not spec.family or spec.k < 1 or not spec.gammas:
        raise ParameterError("component-structure needs family, k, and gammas")
    graph = parse_family(spec.family, seed=spec.seed)
    root = RandomStream(spec.seed)
    cells = [(gi, t) for gi in range(len(spec.gammas)) for t in range(spec.trials)]

    def worker(cell):
        gi, trial = cell
        gamma = spec.gammas[gi]
        stream = root.child(TAG_CELL, gi, trial)
        state = sample_reference(graph, spec.k, stream)
        bad = int(bad_mask(state, graph, gamma).sum())
        if bad == 0:
            return {
                "gamma": gamma, "trial": trial, "bad": 0, "set_size": 0,
                "components": 0, "max_component": 0,
            }
        rset = build_resampling_set(state, graph, gamma)
        return {
            "gamma": gamma, "trial": trial, "bad": bad, "set_size": rset.size,
            "components": len(rset.components),
            "max_component": rset.max_component_size,
        }

    raw = _run_cells(cells, worker, spec.threads)
    rows = aggregate("component-structure", raw)
    return ExperimentReport(
        spec=spec.to_dict(), rows=rows, raw=raw,
        meta={"n": graph.n, "edges": graph.edge_count, "max_degree": graph.max_degree},
    )


def run_effective_levels(spec: ExperimentSpec) -> ExperimentReport:
    """Counts, per schedule base, how many levels did work versus were
    skipped on full sampler runs."""
    if not spec.family or spec.k < 1 or not spec.bases:
        raise ParameterError("effective-levels needs family, k, and bases")
    graph = parse_family(spec.family, seed=spec.seed)
    root = RandomStream(spec.seed)
    cells = [(bi, t) for bi in range(len(spec.bases)) for t in range(spec.trials)]

    def worker(cell):
        bi, trial = cell
        base = spec.bases[bi]
        stream = root.child(TAG_CELL, bi, trial)
        result = sample_iterative(graph, spec.k, stream, GammaSchedule(base))
        stats = result.stats
        return {
            "base": base, "trial": trial,
            "effective": stats.effective_levels, "skipped": stats.skipped_levels,
            "levels": stats.levels_visited, "resamples": stats.resample_events,
        }

    raw = _run_cells(cells, worker, spec.threads)
    rows = aggregate("effective-levels", raw)
    return ExperimentReport(spec=spec.to_dict(), rows=rows, raw=raw, meta={"n": graph.n})


def run_comparison_suite(spec: ExperimentSpec) -> ExperimentReport:
    """Runs each fixture under each of its algorithms and reports median
    levels and resample events."""
    if not spec.fixtures:
        raise ParameterError("comparison needs at least one fixture")
    cells = []
    graphs = {}
    for fi, fixture in enumerate(spec.fixtures):
        family = fixture.get("family")
        k = fixture.get("k")
        if not family or not isinstance(k, int) or k < 1:
            raise ParameterError(f"fixture {fi} needs 'family' and integer 'k'")
        graphs[fi] = parse_family(family, seed=spec.seed)
        for algorithm in fixture.get("algorithms", spec.algorithms):
            for trial in range(spec.trials):
                cells.append((fi, algorithm, trial))
    root = RandomStream(spec.seed)

    def worker(cell):
        fi, algorithm, trial = cell
        fixture = spec.fixtures[fi]
        graph = graphs[fi]
        stream = root.child(TAG_CELL, fi, trial)
        base = fixture.get("gamma_base", spec.gamma_base)
        solver = fixture.get("solver", spec.solver)
        metrics = _run_metrics(algorithm, graph, fixture["k"], stream, base, solver)
        return {
            "fixture": fi, "family": fixture["family"], "k": fixture["k"],
            "algorithm": algorithm, "trial": trial, **metrics,
        }

    raw = _run_cells(cells, worker, spec.threads)
    rows = aggregate("comparison", raw)
    return ExperimentReport(spec=spec.to_dict(), rows=rows, raw=raw)


def run_level_growth(spec: ExperimentSpec) -> ExperimentReport:
    """Median level count across a size grid of one family template,
    with a least-squares slope against log size."""
    if "{n}" not in spec.family or not spec.sizes or spec.k < 1:
        raise ParameterError(
            "level-growth needs a family template containing '{n}', sizes, and k"
        )
    algorithm = spec.algorithms[0]
    graphs = {
        n: parse_family(spec.family.format(n=n), seed=spec.seed) for n in spec.sizes
    }
    root = RandomStream(spec.seed)
    cells = [(ni, t) for ni in range(len(spec.sizes)) for t in range(spec.trials)]

    def worker(cell):
        ni, trial = cell
        n = spec.sizes[ni]
        stream = root.child(TAG_CELL, ni, trial)
        metrics = _run_metrics(
            algorithm, graphs[n], spec.k, stream, spec.gamma_base, spec.solver
        )
        return {
            "n": n, "trial": trial,
            "levels": metrics["levels"], "resamples": metrics["resamples"],
        }

    raw = _run_cells(cells, worker, spec.threads)
    rows = aggregate("level-growth", raw)
    meta = {"algorithm": algorithm}
    if len(rows) >= 2:
        xs = np.log([row["n"] for row in rows])
        ys = np.array([row["median_levels"] for row in rows])
        slope, intercept = np.polyfit(xs, ys, 1)
        meta["slope_vs_log_n"] = float(slope)
        meta["intercept"] = float(intercept)
    return ExperimentReport(spec=spec.to_dict(), rows=rows, raw=raw, meta=meta)


def aggregate(kind: str, raw: list) -> list:
    """Recompute aggregate rows from raw per-trial records."""
    if kind == "component-structure":
        rows = []
        for gamma in sorted({r["gamma"] for r in raw}, reverse=True):
            cell = [r for r in raw if r["gamma"] == gamma]
            rows.append({
                "gamma": gamma,
                "trials": len(cell),
                "avg_bad": _mean([r["bad"] for r in cell]),
                "avg_set_size": _mean([r["set_size"] for r in cell]),
                "avg_components": _mean([r["components"] for r in cell]),
                "max_components": max(r["components"] for r in cell),
                "avg_max_component": _mean([r["max_component"] for r in cell]),
            })
        return rows
    if kind == "effective-levels":
        rows = []
        for base in sorted({r["base"] for r in raw}, reverse=True):
            cell = [r for r in raw if r["base"] == base]
            rows.append({
                "base": base,
                "trials": len(cell),
                "median_effective": _median([r["effective"] for r in cell]),
                "median_skipped": _median([r["skipped"] for r in cell]),
                "median_levels": _median([r["levels"] for r in cell]),
            })
        return rows
    if kind == "comparison":
        rows = []
        seen = []
        for r in raw:
            key = (r["fixture"], r["algorithm"])
            if key not in seen:
                seen.append(key)
        for fi, algorithm in seen:
            cell = [r for r in raw if r["fixture"] == fi and r["algorithm"] == algorithm]
            rows.append({
                "fixture": fi,
                "family": cell[0]["family"],
                "k": cell[0]["k"],
                "algorithm": algorithm,
                "trials": len(cell),
                "median_levels": _median([r["levels"] for r in cell]),
                "median_resamples": _median([r["resamples"] for r in cell]),
            })
        return rows
    if kind == "level-growth":
        rows = []
        for n in sorted({r["n"] for r in raw}):
            cell = [r for r in raw if r["n"] == n]
            rows.append({
                "n": n,
                "trials": len(cell),
                "median_levels": _median([r["levels"] for r in cell]),
                "max_levels": max(r["levels"] for r in cell),
            })
        return rows
    raise ParameterError(f"unknown experiment kind: {kind!r}")


_RUNNERS = {
    "component-structure": run_component_structure,
    "effective-levels": run_effective_levels,
    "comparison": run_comparison_suite,
    "level-growth": run_level_growth,
}


def run_experiment(spec: ExperimentSpec) -> ExperimentReport:
    return _RUNNERS[spec.kind](spec)
