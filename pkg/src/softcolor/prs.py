"""Level-descending partial rejection samplers.

Both samplers share the same outer structure: draw a fresh product
state, then walk a strictly decreasing softness schedule. At each level
the state is repaired until no vertex is bad at the current gamma; the
walk stops as soon as the coloring is proper. Because the acceptable
sets shrink monotonically with gamma and each level's repair loop exits
with an exact draw from the level's conditional target, the colors
returned on termination are uniform over proper colorings.

The two variants differ in how a level is repaired:

* ``sample_iterative`` redraws the whole resampling set from the
  product measure and loops.
* ``sample_recursive`` also redraws the set, but then recursively
  repairs each connected component of the set (as a standalone induced
  subgraph, with the subgraph's own degrees) through all levels from 0
  up to the current one before re-checking the full graph.

``gamma_prs_at_level`` exposes the single-level repair procedure
directly; run against a fresh state it produces exact draws from the
gamma-soft target, which is what the distribution tests exercise.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import BudgetExhaustedError, ParameterError
from .graph import Graph
from .rng import RandomStream
from .softstate import (
    GammaSchedule,
    SoftState,
    bad_mask,
    build_resampling_set,
    is_proper,
    resample_vertices,
    sample_reference,
)

__all__ = [
    "SweepRecord",
    "RunStats",
    "SampleResult",
    "sample_iterative",
    "sample_recursive",
    "gamma_prs_at_level",
    "sample_rejection",
]

DEFAULT_MAX_LEVELS = 200
DEFAULT_MAX_SWEEPS = 100_000


def default_level_budget(base: float) -> int:
    """Level budget that lets the schedule reach gamma ~ 1e-9 whatever
    the base, so slow schedules are not cut off prematurely."""
    import math

    return max(DEFAULT_MAX_LEVELS, math.ceil(math.log(1e-9) / math.log(base)))


class SweepRecord(NamedTuple):
    level: int
    bad_count: int
    set_size: int
    component_count: int
    max_component_size: int


@dataclass
class RunStats:
    """Counters accumulated over one sampling run.

    ``levels_visited`` counts schedule levels entered (effective ones
    performed at least one resampling round, skipped ones found an
    already-clean state; the two always sum to levels_visited).
    ``resample_events`` counts resampling rounds: each round builds one
    resampling set and redraws it. ``vertex_resamples`` totals the
    vertices redrawn by those rounds (for component solvers that retry
    internally, every retry counts). ``per_sweep`` keeps one record per
    top-level round in execution order.
    """

    levels_visited: int = 0
    effective_levels: int = 0
    skipped_levels: int = 0
    resample_events: int = 0
    vertex_resamples: int = 0
    component_solves: int = 0
    cftp_fallbacks: int = 0
    per_sweep: list = field(default_factory=list)

    def record_sweep(self, level, bad_count, set_size, component_count, max_component):
        self.per_sweep.append(
            SweepRecord(level, bad_count, set_size, component_count, max_component)
        )

    def close_level(self, effective: bool):
        self.levels_visited += 1
        if effective:
            self.effective_levels += 1
        else:
            self.skipped_levels += 1

    def to_dict(self) -> dict:
        return {
            "levels_visited": self.levels_visited,
            "effective_levels": self.effective_levels,
            "skipped_levels": self.skipped_levels,
            "resample_events": self.resample_events,
            "vertex_resamples": self.vertex_resamples,
            "component_solves": self.component_solves,
            "cftp_fallbacks": self.cftp_fallbacks,
        }


@dataclass(frozen=True)
class SampleResult:
    colors: np.ndarray
    state: SoftState
    stats: RunStats

    @property
    def coloring(self) -> tuple[int, ...]:
        return tuple(int(c) for c in self.colors)


def budget_message(graph: Graph, k: int, what: str) -> str:
    if k <= graph.max_degree:
        hint = (
            f"k={k} does not exceed the maximum degree {graph.max_degree}; "
            "the instance may admit no proper coloring at this k"
        )
    else:
        hint = "the instance looks colorable; raise the budget and retry"
    return f"{what} exhausted before reaching a proper coloring: {hint}"


def _check_sampler_args(k: int, max_levels: int):
    if k < 1:
        raise ParameterError("k must be at least 1")
    if max_levels < 1:
        raise ParameterError("max_levels must be at least 1")


def sample_iterative(
    graph: Graph,
    k: int,
    rng: RandomStream,
    schedule: GammaSchedule = GammaSchedule(),
    max_levels: int | None = None,
    max_sweeps_per_level: int = DEFAULT_MAX_SWEEPS,
) -> SampleResult:
    """Exact uniform proper coloring via whole-set resampling per level.

    ``max_levels=None`` picks a budget deep enough for the schedule base
    to reach vanishing gamma.
    """
    if max_levels is None:
        max_levels = default_level_budget(schedule.base)
    _check_sampler_args(k, max_levels)
    state = sample_reference(graph, k, rng)
    stats = RunStats()
    level = 0
    while not is_proper(state, graph):
        if level >= max_levels:
            raise BudgetExhaustedError(budget_message(graph, k, "level budget"), stats)
        gamma = schedule.gamma(level)
        sweeps = 0
        while True:
            bm = bad_mask(state, graph, gamma)
            if not bm.any():
                break
            if sweeps >= max_sweeps_per_level:
                raise BudgetExhaustedError(
                    budget_message(graph, k, f"sweep budget at level {level}"), stats
                )
            rset = build_resampling_set(state, graph, gamma)
            stats.record_sweep(
                level, int(bm.sum()), rset.size, len(rset.components),
                rset.max_component_size,
            )
            state = resample_vertices(state, rset.vertices, rng)
            stats.resample_events += 1
            stats.vertex_resamples += rset.size
            sweeps += 1
        stats.close_level(effective=sweeps > 0)
        level += 1
    return SampleResult(state.colors, state, stats)


def _repair_level(
    graph: Graph,
    state: SoftState,
    level: int,
    schedule: GammaSchedule,
    rng: RandomStream,
    depth,
    stats: RunStats,
    record_sweeps: bool,
    max_sweeps: int,
) -> SoftState:
    """One level of the recursive repair; loops until nothing is bad at
    the level's gamma on ``graph``."""
    gamma = schedule.gamma(level)
    sweeps = 0
    while True:
        bm = bad_mask(state, graph, gamma)
        if not bm.any():
            return state
        if sweeps >= max_sweeps:
            raise BudgetExhaustedError(
                budget_message(graph, state.k, f"sweep budget at level {level}"), stats
            )
        rset = build_resampling_set(state, graph, gamma)
        if record_sweeps:
            stats.record_sweep(
                level, int(bm.sum()), rset.size, len(rset.components),
                rset.max_component_size,
            )
        state = resample_vertices(state, rset.vertices, rng)
        stats.resample_events += 1
        stats.vertex_resamples += rset.size
        if depth is None or depth > 0:
            sub_depth = None if depth is None else depth - 1
            for comp in rset.components:
                sub, mapping = graph.induced_subgraph(comp)
                substate = SoftState(
                    state.colors[mapping].copy(), state.uniforms[mapping].copy(), state.k
                )
                for j in range(level + 1):
                    substate = _repair_level(
                        sub, substate, j, schedule, rng, sub_depth, stats,
                        record_sweeps=False, max_sweeps=max_sweeps,
                    )
                state = state.with_values(mapping, substate.colors, substate.uniforms)
        sweeps += 1


def gamma_prs_at_level(
    graph: Graph,
    state: SoftState,
    level: int,
    schedule: GammaSchedule,
    rng: RandomStream,
    depth=None,
    max_sweeps: int = DEFAULT_MAX_SWEEPS,
) -> SampleResult:
    """Repair ``state`` at one fixed schedule level.

    On return no vertex of ``graph`` is bad at gamma_level. Applied to a
    fresh product draw this is an exact sampler for the level's
    soft-constrained target. ``depth`` caps the recursion: 0 means plain
    set resampling, None means unbounded (the level index bounds it in
    practice).
    """
    if depth is not None and depth < 0:
        raise ParameterError("depth must be None or non-negative")
    stats = RunStats()
    old_limit = sys.getrecursionlimit()
    if old_limit < 50_000:
        sys.setrecursionlimit(50_000)
    try:
        state = _repair_level(
            graph, state, level, schedule, rng, depth, stats,
            record_sweeps=True, max_sweeps=max_sweeps,
        )
    finally:
        sys.setrecursionlimit(old_limit)
    return SampleResult(state.colors, state, stats)


def sample_recursive(
    graph: Graph,
    k: int,
    rng: RandomStream,
    schedule: GammaSchedule = GammaSchedule(),
    max_levels: int | None = None,
    max_sweeps_per_level: int = DEFAULT_MAX_SWEEPS,
    depth=None,
) -> SampleResult:
    """Exact uniform proper coloring via component-recursive repair.

    Each top-level round extracts the resampling set as an induced
    subgraph and hands it to the single-level repair, which resamples
    and then recursively settles every component through levels
    0..current before the full graph is re-checked.
    """
    if max_levels is None:
        max_levels = default_level_budget(schedule.base)
    _check_sampler_args(k, max_levels)
    state = sample_reference(graph, k, rng)
    stats = RunStats()
    level = 0
    old_limit = sys.getrecursionlimit()
    if old_limit < 50_000:
        sys.setrecursionlimit(50_000)
    try:
        while not is_proper(state, graph):
            if level >= max_levels:
                raise BudgetExhaustedError(budget_message(graph, k, "level budget"), stats)
            gamma = schedule.gamma(level)
            sweeps = 0
            while True:
                bm = bad_mask(state, graph, gamma)
                if not bm.any():
                    break
                if sweeps >= max_sweeps_per_level:
                    raise BudgetExhaustedError(
                        budget_message(graph, k, f"sweep budget at level {level}"), stats
                    )
                rset = build_resampling_set(state, graph, gamma)
                stats.record_sweep(
                    level, int(bm.sum()), rset.size, len(rset.components),
                    rset.max_component_size,
                )
                sub, mapping = graph.induced_subgraph(rset.vertices)
                substate = SoftState(
                    state.colors[mapping].copy(), state.uniforms[mapping].copy(), k
                )
                substate = _repair_level(
                    sub, substate, level, schedule, rng, depth, stats,
                    record_sweeps=False, max_sweeps=max_sweeps_per_level,
                )
                state = state.with_values(mapping, substate.colors, substate.uniforms)
                sweeps += 1
            stats.close_level(effective=sweeps > 0)
            level += 1
    finally:
        sys.setrecursionlimit(old_limit)
    return SampleResult(state.colors, state, stats)


def sample_rejection(
    graph: Graph, k: int, rng: RandomStream, max_iterations: int = 10_000_000
) -> tuple[np.ndarray, int]:
    """Whole-graph rejection baseline: redraw colors until proper.

    Returns (colors, iterations) where iterations counts every draw
    including the accepted one. Exponentially slow in the edge count;
    exists as a correctness oracle and cost yardstick.
    """
    if k < 1:
        raise ParameterError("k must be at least 1")
    src, dst = graph.edge_src, graph.indices
    for it in range(1, max_iterations + 1):
        colors = rng.colors(k, graph.n)
        if not (colors[src] == colors[dst]).any():
            return colors, it
    raise BudgetExhaustedError(
        budget_message(graph, k, "rejection iteration budget"), None
    )
