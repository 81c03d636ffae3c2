"""Statistical verification: enumeration oracles and chi-square tests.

The samplers in this package claim *exact* target distributions, so the
test strategy is blunt: enumerate the target exactly on small graphs
(backtracking, guarded by a state-space cap), draw many samples, and
run frequency tests at a fixed 1% level. Everything is seeded, so a
passing suite is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from collections import Counter

import numpy as np
from scipy.stats import chi2

from .errors import BudgetExhaustedError, CapacityError, ParameterError
from .graph import Graph
from .rng import RandomStream
from .softstate import SoftState, bad_mask, sample_reference

__all__ = [
    "EnumerationResult",
    "ChiSquareReport",
    "enumerate_proper",
    "pair_marginal",
    "eta_gamma_oracle",
    "chi_square_from_counts",
    "two_sample_from_counts",
    "uniformity_test",
    "two_sample_test",
]

ENUMERATION_CAP = 10**8
ORACLE_REJECTION_BUDGET = 10**7


@dataclass(frozen=True)
class EnumerationResult:
    """All proper k-colorings of a graph, with a stable outcome index."""

    total: int
    index: dict  # color tuple -> position in enumeration order

    def position(self, coloring) -> int:
        key = tuple(int(c) for c in coloring)
        if key not in self.index:
            raise ParameterError(f"coloring {key} is not proper for this instance")
        return self.index[key]


@dataclass(frozen=True)
class ChiSquareReport:
    statistic: float
    dof: int
    p_value: float
    sample_size: int
    rejected_at_1pct: bool

    def to_dict(self) -> dict:
        return {
            "statistic": self.statistic,
            "dof": self.dof,
            "p_value": self.p_value,
            "sample_size": self.sample_size,
            "rejected_at_1pct": self.rejected_at_1pct,
        }


def _guard_state_space(graph: Graph, k: int):
    if k < 1:
        raise ParameterError("k must be at least 1")
    if k**graph.n > ENUMERATION_CAP:
        raise CapacityError(
            f"state space {k}^{graph.n} exceeds enumeration cap {ENUMERATION_CAP}"
        )


def _backtrack(graph: Graph, k: int, visit):
    """Run ``visit(assignment)`` on every proper k-coloring (1-based)."""
    n = graph.n
    assign = [0] * n
    earlier = [tuple(w for w in graph.adjacency[v] if w < v) for v in range(n)]

    def rec(v: int):
        if v == n:
            visit(assign)
            return
        for c in range(1, k + 1):
            ok = True
            for w in earlier[v]:
                if assign[w] == c:
                    ok = False
                    break
            if ok:
                assign[v] = c
                rec(v + 1)
        assign[v] = 0

    rec(0)


def enumerate_proper(graph: Graph, k: int) -> EnumerationResult:
    """Backtracking enumeration of proper colorings; capped at 10**8 states."""
    _guard_state_space(graph, k)
    index: dict = {}

    def visit(assign):
        index[tuple(assign)] = len(index)

    _backtrack(graph, k, visit)
    return EnumerationResult(total=len(index), index=index)


def pair_marginal(graph: Graph, k: int, pair: tuple[int, int]) -> dict:
    """Exact joint color distribution of two vertices under the uniform
    measure on proper colorings, computed by counting enumeration."""
    _guard_state_space(graph, k)
    v, w = pair
    counts: Counter = Counter()

    def visit(assign):
        counts[(assign[v], assign[w])] += 1

    _backtrack(graph, k, visit)
    total = sum(counts.values())
    if total == 0:
        raise ParameterError("graph has no proper coloring at this k")
    return {key: cnt / total for key, cnt in counts.items()}


def eta_gamma_oracle(
    graph: Graph, k: int, gamma: float, rng: RandomStream, runs: int
) -> list[tuple[int, ...]]:
    """Color vectors drawn from the soft-constrained target at ``gamma``
    by naive rejection: redraw full fresh states until none of the
    vertices is bad. Deliberately independent of the samplers under
    test. Budgeted at 10**7 rejections total."""
    out: list[tuple[int, ...]] = []
    rejections = 0
    while len(out) < runs:
        state = sample_reference(graph, k, rng)
        if bad_mask(state, graph, gamma).any():
            rejections += 1
            if rejections > ORACLE_REJECTION_BUDGET:
                raise BudgetExhaustedError(
                    "rejection oracle exceeded its budget; gamma too small "
                    "or instance too constrained for a naive oracle"
                )
            continue
        out.append(tuple(int(c) for c in state.colors))
    return out


def chi_square_from_counts(observed, expected) -> ChiSquareReport:
    """One-sample test of observed counts against expected counts.

    ``expected`` must sum to the same total (up to rounding) and be
    positive in every cell.
    """
    obs = np.asarray(observed, dtype=np.float64)
    exp = np.asarray(expected, dtype=np.float64)
    if obs.shape != exp.shape or obs.ndim != 1:
        raise ParameterError("observed and expected must be 1-d and congruent")
    if (exp <= 0).any():
        raise ParameterError("expected counts must be positive")
    stat = float(((obs - exp) ** 2 / exp).sum())
    dof = obs.size - 1
    p = float(chi2.sf(stat, dof))
    return ChiSquareReport(stat, dof, p, int(obs.sum()), p < 0.01)


def two_sample_from_counts(counts_a: dict, counts_b: dict, pool_below: int = 10) -> ChiSquareReport:
    """Homogeneity test for two samples over a shared discrete space.

    Outcomes whose combined count falls below ``pool_below`` are pooled
    into one cell so sparse tails do not break the approximation.
    """
    keys = sorted(set(counts_a) | set(counts_b))
    a = np.array([counts_a.get(key, 0) for key in keys], dtype=np.float64)
    b = np.array([counts_b.get(key, 0) for key in keys], dtype=np.float64)
    combined = a + b
    keep = combined >= pool_below
    if not keep.all():
        a = np.append(a[keep], a[~keep].sum())
        b = np.append(b[keep], b[~keep].sum())
        combined = a + b
        if combined[-1] == 0:
            a, b, combined = a[:-1], b[:-1], combined[:-1]
    if combined.size < 2:
        raise ParameterError("fewer than two populated cells after pooling")
    n_a, n_b, total = a.sum(), b.sum(), combined.sum()
    exp_a = combined * n_a / total
    exp_b = combined * n_b / total
    stat = float(((a - exp_a) ** 2 / exp_a).sum() + ((b - exp_b) ** 2 / exp_b).sum())
    dof = combined.size - 1
    p = float(chi2.sf(stat, dof))
    return ChiSquareReport(stat, dof, p, int(total), p < 0.01)


def uniformity_test(
    sampler, graph: Graph, k: int, runs: int, rng: RandomStream
) -> ChiSquareReport:
    """Test that ``sampler(graph, k, stream)`` is uniform over the proper
    colorings of the instance.

    The outcome space is enumerated exactly, so the instance must be
    small; ``runs`` is required to be at least 20x the number of proper
    colorings to keep expected cell counts healthy. A sampler returning
    an improper coloring fails immediately.
    """
    enum = enumerate_proper(graph, k)
    if enum.total == 0:
        raise ParameterError("no proper colorings at this k")
    if runs < 20 * enum.total:
        raise ParameterError(
            f"need runs >= 20 * {enum.total} for stable expected counts"
        )
    counts = np.zeros(enum.total, dtype=np.int64)
    for i in range(runs):
        coloring = sampler(graph, k, rng.child(i))
        counts[enum.position(coloring)] += 1
    expected = np.full(enum.total, runs / enum.total)
    return chi_square_from_counts(counts, expected)


def two_sample_test(
    sampler_a, sampler_b, graph: Graph, k: int, runs: int, rng: RandomStream
) -> ChiSquareReport:
    """Homogeneity test between two proper-coloring samplers."""
    counts_a: Counter = Counter()
    counts_b: Counter = Counter()
    for i in range(runs):
        counts_a[tuple(int(c) for c in sampler_a(graph, k, rng.child(0, i)))] += 1
    for i in range(runs):
        counts_b[tuple(int(c) for c in sampler_b(graph, k, rng.child(1, i)))] += 1
    return two_sample_from_counts(counts_a, counts_b)
