"""Closed-form quantities describing the soft-constraint sampler.

Everything here is a plain function of (gamma, degree, k)-style scalars;
nothing samples. The Monte Carlo cross-checks live in the test suite.

Notation used below: for a vertex of degree d, a same-colored
non-passive neighbor event has probability (1 - gamma**d_w)/k per
neighbor w, so under a fresh product draw

    p_bad(v) = 1 - prod_w (1 - (1-gamma) * (1-gamma**d_w) / k)

and on a Delta-regular graph this collapses to 1 - (1 - alpha)**Delta
with alpha = (1-gamma) * (1-gamma**Delta) / k.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ParameterError, SupercriticalError
from .graph import Graph

__all__ = [
    "alpha",
    "p_bad_regular",
    "p_bad_general",
    "expected_bad_regular",
    "expected_bad_graph",
    "p_passive",
    "bernoulli_bound",
    "gamma_critical",
    "effective_level_count",
    "k_sufficient",
    "site_open_probability",
    "percolation_decay_rate",
    "expected_cluster_size",
    "k_hybrid_bound",
    "nrs_fullgraph_expected_iterations_bound",
    "nrs_component_acceptance_bound",
    "lll_margin",
    "lll_satisfied",
]


def _check(gamma: float, k: int | None = None, delta: int | None = None):
    if not 0.0 <= gamma <= 1.0:
        raise ParameterError("gamma must lie in [0, 1]")
    if k is not None and k < 1:
        raise ParameterError("k must be at least 1")
    if delta is not None and delta < 0:
        raise ParameterError("degree must be non-negative")


def alpha(gamma: float, delta: int, k: int) -> float:
    """Per-neighbor conflict probability (1-gamma)(1-gamma**delta)/k."""
    _check(gamma, k, delta)
    return (1.0 - gamma) * (1.0 - gamma**delta) / k


def p_bad_regular(gamma: float, delta: int, k: int) -> float:
    """Probability a fixed vertex of a delta-regular graph is bad under
    a fresh product draw. Exact on regular graphs; an upper bound when
    delta is the maximum degree."""
    a = alpha(gamma, delta, k)
    return 1.0 - (1.0 - a) ** delta


def p_bad_general(gamma: float, neighbor_degrees, k: int) -> float:
    """Badness probability for a vertex whose neighbors have the given
    degrees (need not be regular)."""
    _check(gamma, k)
    prod = 1.0
    for d in neighbor_degrees:
        if d < 1:
            raise ParameterError("neighbor degrees must be positive")
        prod *= 1.0 - (1.0 - gamma) * (1.0 - gamma**d) / k
    return 1.0 - prod


def expected_bad_regular(n: int, gamma: float, delta: int, k: int) -> float:
    """Expected number of bad vertices on a delta-regular n-vertex graph."""
    if n < 0:
        raise ParameterError("n must be non-negative")
    return n * p_bad_regular(gamma, delta, k)


def expected_bad_graph(graph: Graph, gamma: float, k: int) -> float:
    """Expected number of bad vertices under a fresh draw, summed per vertex."""
    return float(
        sum(
            p_bad_general(gamma, [graph.degree(w) for w in graph.adjacency[v]], k)
            for v in range(graph.n)
        )
    )


def p_passive(gamma: float, degree: int) -> float:
    """gamma ** degree, with 0 ** 0 == 1."""
    _check(gamma, delta=degree)
    return float(gamma) ** degree


def bernoulli_bound(gamma: float, delta: int, k: int) -> float:
    """Union-bound form delta * alpha, always >= p_bad_regular."""
    return delta * alpha(gamma, delta, k)


def gamma_critical(delta: int) -> float:
    """Threshold softness above which non-passive percolation is subcritical.

    Solves gamma**delta == (delta-2)/(delta-1); only defined for
    delta >= 3 (a degree-2 graph has no percolation transition to speak
    of, so we refuse rather than extrapolate).
    """
    if delta < 3:
        raise ParameterError("gamma_critical requires degree at least 3")
    return ((delta - 2) / (delta - 1)) ** (1.0 / delta)


def effective_level_count(base: float, delta: int) -> int:
    """Number of geometric levels strictly above the critical softness.

    floor(log gamma_crit / log base): levels up to this index have
    gamma_level > gamma_critical(delta), so their resampling sets stay
    logarithmically small with high probability.
    """
    if not 0.0 < base < 1.0:
        raise ParameterError("base must lie strictly between 0 and 1")
    gc = gamma_critical(delta)
    return int(math.floor(math.log(gc) / math.log(base)))


def k_sufficient(delta: int) -> float:
    """Colors sufficient for the one-shot feasibility bound at the
    critical softness: e * delta**3 * (1-gamma_crit) * (1-gamma_crit**delta)."""
    gc = gamma_critical(delta)
    return math.e * delta**3 * (1.0 - gc) * (1.0 - gc**delta)


def site_open_probability(gamma: float, delta: int) -> float:
    """q = 1 - gamma**delta: chance a degree-delta vertex is non-passive."""
    _check(gamma, delta=delta)
    return 1.0 - gamma**delta


def _branching_mean(gamma: float, delta: int) -> float:
    if delta < 3:
        raise ParameterError("percolation rates require degree at least 3")
    _check(gamma)
    return site_open_probability(gamma, delta) * (delta - 1)


def percolation_decay_rate(gamma: float, delta: int) -> float:
    """Exponential rate c = log(1 / (q * (delta-1))) for the cluster-size
    tail bound exp(-c*s). Requires the subcritical regime
    q * (delta-1) < 1, i.e. gamma > gamma_critical(delta)."""
    m = _branching_mean(gamma, delta)
    if m >= 1.0:
        raise SupercriticalError(
            f"supercritical at gamma={gamma}: q*(delta-1) = {m:.4f} >= 1"
        )
    return math.log(1.0 / m)


def expected_cluster_size(gamma: float, delta: int) -> float:
    """Branching-process mean cluster size 1 / (1 - q*(delta-1))."""
    m = _branching_mean(gamma, delta)
    if m >= 1.0:
        raise SupercriticalError(
            f"supercritical at gamma={gamma}: q*(delta-1) = {m:.4f} >= 1"
        )
    return 1.0 / (1.0 - m)


def k_hybrid_bound(gamma: float, delta: int) -> float:
    """Colors needed so per-level expected work stays bounded:
    delta * (1-gamma) * (1-gamma**delta) / c(gamma, delta). Tiny for
    moderate gamma; the practical constraint is the component solver."""
    c = percolation_decay_rate(gamma, delta)
    return delta * (1.0 - gamma) * (1.0 - gamma**delta) / c


def nrs_fullgraph_expected_iterations_bound(k: int, edge_count: int) -> float:
    """(k/(k-1)) ** |E|: the exponential cost scale of whole-graph
    rejection sampling, which the level machinery exists to avoid."""
    if k < 2:
        raise ParameterError("k must be at least 2")
    if edge_count < 0:
        raise ParameterError("edge count must be non-negative")
    return (k / (k - 1)) ** edge_count


def nrs_component_acceptance_bound(size: int, gamma: float, delta: int, k: int) -> float:
    """Lower bound 1 - s*delta*alpha on one-shot acceptance when
    rejection-sampling a size-s component inside a max-degree-delta graph."""
    if size < 1:
        raise ParameterError("component size must be positive")
    return 1.0 - size * delta * alpha(gamma, delta, k)


def lll_margin(gamma: float, delta: int, k: int) -> float:
    """e * p_bad * (delta**2 + 1), the full feasibility product.

    delta**2 counts the badness dependency neighborhood (each bad event
    shares vertices with at most delta + delta*(delta-1) others).
    """
    return math.e * p_bad_regular(gamma, delta, k) * (delta**2 + 1)


def lll_satisfied(gamma: float, delta: int, k: int) -> bool:
    return lll_margin(gamma, delta, k) <= 1.0
