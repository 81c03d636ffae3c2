"""Soft-constrained coloring states and the resampling-set machinery.

A state assigns every vertex a color c_v in 1..k and an auxiliary
uniform u_v in (0, 1). For a softness level gamma in [0, 1] define

* the conflict count n_v: the number of neighbors w with c_w == c_v and
  u_w > gamma ** d_w (d_w the degree of w),
* v is *passive* when u_v <= gamma ** d_v (such a vertex can never be
  bad, whatever its neighborhood does),
* v is *bad* when u_v > gamma ** n_v.

0 ** 0 evaluates to 1, so at gamma == 0 a conflict-free vertex is never
bad and badness reduces to "has a same-colored neighbor with positive
u", i.e. the hard proper-coloring constraint. At gamma == 1 nothing is
ever bad. Shrinking gamma therefore tightens the constraint, and the
set of acceptable states shrinks monotonically toward the proper
colorings.

Tie-breaking is exactly as the inequalities read: u_v == gamma ** n_v
is not bad, u_v == gamma ** d_v is passive.
"""

from __future__ import annotations

from dataclasses import dataclass
from collections import deque

import numpy as np

from .errors import ParameterError
from .graph import Graph
from .rng import RandomStream

__all__ = [
    "SoftState",
    "GammaSchedule",
    "ResamplingSet",
    "sample_reference",
    "conflict_count",
    "is_passive",
    "is_bad",
    "nonpassive_mask",
    "conflict_counts",
    "bad_mask",
    "bad_set",
    "is_proper",
    "build_resampling_set",
    "resample_vertices",
]


@dataclass(frozen=True)
class SoftState:
    """Colors in 1..k plus auxiliary uniforms in (0, 1), one per vertex."""

    colors: np.ndarray
    uniforms: np.ndarray
    k: int

    def __post_init__(self):
        if self.colors.shape != self.uniforms.shape:
            raise ParameterError("colors and uniforms must have equal length")
        if self.k < 1:
            raise ParameterError("k must be at least 1")

    @property
    def n(self) -> int:
        return int(self.colors.size)

    def copy(self) -> "SoftState":
        return SoftState(self.colors.copy(), self.uniforms.copy(), self.k)

    def with_values(self, vertices, colors, uniforms) -> "SoftState":
        """A new state with (colors, uniforms) overwritten on ``vertices``."""
        c = self.colors.copy()
        u = self.uniforms.copy()
        idx = np.asarray(vertices, dtype=np.int64)
        c[idx] = colors
        u[idx] = uniforms
        return SoftState(c, u, self.k)


@dataclass(frozen=True)
class GammaSchedule:
    """Geometric level schedule gamma_level = base ** level.

    Level 0 is always 1 (no constraint); the sequence decreases strictly
    toward 0. base defaults to 0.9; anything in (0, 1) is valid, slower
    decay spends more levels but keeps per-level work smaller.
    """

    base: float = 0.9

    def __post_init__(self):
        if not 0.0 < self.base < 1.0:
            raise ParameterError("schedule base must lie strictly between 0 and 1")

    def gamma(self, level: int) -> float:
        if level < 0:
            raise ParameterError("level must be non-negative")
        return self.base**level


@dataclass(frozen=True)
class ResamplingSet:
    """The vertex set scheduled for resampling, split into roles.

    ``interior`` holds the bad vertices and every vertex reached from
    them through non-passive neighbors; ``boundary`` holds the passive
    vertices adjacent to the interior (they are resampled too, but the
    expansion stops at them). ``components`` are the connected
    components of the subgraph induced on interior | boundary, each a
    sorted vertex tuple; a shared boundary vertex merges the regions it
    touches. Components are ordered by their smallest vertex, which also
    serves as the component id.
    """

    interior: frozenset
    boundary: frozenset
    components: tuple[tuple[int, ...], ...]

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self.interior | self.boundary))

    @property
    def size(self) -> int:
        return len(self.interior) + len(self.boundary)

    @property
    def max_component_size(self) -> int:
        return max((len(c) for c in self.components), default=0)


def sample_reference(graph: Graph, k: int, rng: RandomStream) -> SoftState:
    """An independent fresh draw: colors uniform on 1..k, u uniform on (0,1)."""
    if k < 1:
        raise ParameterError("k must be at least 1")
    return SoftState(rng.colors(k, graph.n), rng.open_uniform(graph.n), k)


def _check_gamma(gamma: float):
    if not 0.0 <= gamma <= 1.0:
        raise ParameterError("gamma must lie in [0, 1]")


def conflict_count(state: SoftState, graph: Graph, gamma: float, v: int) -> int:
    """n_v: same-colored neighbors of v that are not passive at gamma."""
    _check_gamma(gamma)
    c, u = state.colors, state.uniforms
    total = 0
    for w in graph.adjacency[v]:
        if c[w] == c[v] and u[w] > gamma ** graph.degree(w):
            total += 1
    return total


def is_passive(state: SoftState, graph: Graph, gamma: float, v: int) -> bool:
    _check_gamma(gamma)
    return bool(state.uniforms[v] <= gamma ** graph.degree(v))


def is_bad(state: SoftState, graph: Graph, gamma: float, v: int) -> bool:
    _check_gamma(gamma)
    return bool(state.uniforms[v] > gamma ** conflict_count(state, graph, gamma, v))


def nonpassive_mask(state: SoftState, graph: Graph, gamma: float) -> np.ndarray:
    """Boolean mask of vertices with u_v > gamma ** d_v."""
    _check_gamma(gamma)
    return state.uniforms > np.power(gamma, graph.degrees.astype(np.float64))


def conflict_counts(state: SoftState, graph: Graph, gamma: float) -> np.ndarray:
    """All n_v at once (vectorized over the CSR adjacency)."""
    _check_gamma(gamma)
    c = state.colors
    np_mask = nonpassive_mask(state, graph, gamma)
    src, dst = graph.edge_src, graph.indices
    hit = (c[src] == c[dst]) & np_mask[dst]
    return np.bincount(src[hit], minlength=graph.n)


def bad_mask(state: SoftState, graph: Graph, gamma: float) -> np.ndarray:
    n_v = conflict_counts(state, graph, gamma)
    return state.uniforms > np.power(gamma, n_v.astype(np.float64))


def bad_set(state: SoftState, graph: Graph, gamma: float) -> np.ndarray:
    """Sorted array of bad vertices at gamma."""
    return np.flatnonzero(bad_mask(state, graph, gamma))


def is_proper(state: SoftState, graph: Graph) -> bool:
    src, dst = graph.edge_src, graph.indices
    return not bool((state.colors[src] == state.colors[dst]).any())


def build_resampling_set(state: SoftState, graph: Graph, gamma: float) -> ResamplingSet:
    """Grow the resampling set from the current bad vertices.

    Starting from Bad(state, gamma), repeatedly absorb any neighbor that
    is not passive; a passive neighbor is recorded as boundary and not
    expanded through. Both roles end up scheduled for resampling; the
    component split is computed on the subgraph induced by their union.
    """
    _check_gamma(gamma)
    np_mask = nonpassive_mask(state, graph, gamma)
    seeds = np.flatnonzero(bad_mask(state, graph, gamma))
    if seeds.size == 0:
        raise ParameterError("resampling set undefined: no bad vertices")

    interior = set(int(v) for v in seeds)
    boundary: set[int] = set()
    queue = deque(interior)
    while queue:
        v = queue.popleft()
        for w in graph.adjacency[v]:
            if w in interior or w in boundary:
                continue
            if np_mask[w]:
                interior.add(w)
                queue.append(w)
            else:
                boundary.add(w)

    members = interior | boundary
    seen: set[int] = set()
    components: list[tuple[int, ...]] = []
    for start in sorted(members):
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        queue = deque((start,))
        while queue:
            v = queue.popleft()
            for w in graph.adjacency[v]:
                if w in members and w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        components.append(tuple(sorted(comp)))
    return ResamplingSet(frozenset(interior), frozenset(boundary), tuple(components))


def resample_vertices(state: SoftState, vertices, rng: RandomStream) -> SoftState:
    """Redraw (color, uniform) independently on ``vertices``; rest untouched."""
    idx = np.asarray(sorted(int(v) for v in vertices), dtype=np.int64)
    if idx.size == 0:
        return state.copy()
    return state.with_values(idx, rng.colors(state.k, idx.size), rng.open_uniform(idx.size))
