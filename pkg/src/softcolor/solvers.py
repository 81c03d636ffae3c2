"""Component solvers used by the hybrid sampler.

A sweep of the hybrid sampler isolates the connected components of the
resampling set and hands each one to a solver as a self-contained
problem: the component's induced subgraph, the ambient degrees of its
vertices (softness thresholds keep using the full-graph degree), and
the colors of frozen external neighbors that currently count toward
conflicts. Three solvers are provided:

* ``solve_nrs`` redraws the whole component from the product measure
  until no component vertex is bad given the frozen exterior. This is
  an exact draw from the component's conditional distribution.
* ``solve_cftp_huber`` runs a random-scan bounding-chain coupling from
  the past for the Gibbs sampler on proper colorings of the component
  and returns an exactly uniform proper coloring of the induced
  subgraph. The hybrid layer then refreshes the label values of the
  component, which reproduces the same conditional law whenever the
  component's exterior constraints are inactive at the current gamma.
* ``solve_cftp_sweep`` is the same bounding chain driven by a
  systematic vertex scan instead of a random one.

The bounding chain can only coalesce when single-site recoloring is
irreducible, so both coupling solvers refuse components whose color
budget is below max degree + 2 by raising ``SolverTimeoutError``; the
hybrid layer treats that signal as "use the rejection solver here".
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .errors import BudgetExhaustedError, ParameterError, SolverTimeoutError
from .graph import Graph
from .rng import RandomStream
from .softstate import SoftState

__all__ = [
    "SolverKind",
    "ComponentProblem",
    "make_component_problem",
    "solve_nrs",
    "solve_cftp_huber",
    "solve_cftp_sweep",
]


class SolverKind(str, Enum):
    NRS = "nrs"
    HUBER = "huber"
    SWEEP = "cftp-sweep"


@dataclass(frozen=True)
class ComponentProblem:
    """One resampling-set component, frozen exterior included.

    ``vertices`` holds the global ids (ascending) matching the local
    labels of ``subgraph``. ``ambient_degrees[v]`` is the degree of
    local vertex v in the full graph; softness thresholds use it.
    ``exterior_colors[v]`` lists the colors of v's frozen external
    neighbors whose label value currently exceeds their own softness
    threshold (only those contribute to conflict counts).
    """

    vertices: np.ndarray
    subgraph: Graph
    ambient_degrees: np.ndarray
    exterior_colors: tuple[tuple[int, ...], ...]
    k: int
    gamma: float
    stream: RandomStream

    @property
    def size(self) -> int:
        return int(self.vertices.size)


def make_component_problem(
    graph: Graph,
    state: SoftState,
    component: tuple[int, ...],
    gamma: float,
    stream: RandomStream,
) -> ComponentProblem:
    sub, mapping = graph.induced_subgraph(component)
    members = set(int(v) for v in mapping)
    ambient = graph.degrees[mapping].astype(np.int64)
    exterior: list[tuple[int, ...]] = []
    for gv in mapping:
        colors = []
        for w in graph.neighbors(int(gv)):
            w = int(w)
            if w in members:
                continue
            threshold = gamma ** graph.degree(w)
            if state.uniforms[w] > threshold:
                colors.append(int(state.colors[w]))
        exterior.append(tuple(colors))
    return ComponentProblem(
        vertices=mapping,
        subgraph=sub,
        ambient_degrees=ambient,
        exterior_colors=tuple(exterior),
        k=state.k,
        gamma=gamma,
        stream=stream,
    )


def _exterior_table(problem: ComponentProblem) -> np.ndarray:
    """Per-vertex count of frozen conflicting neighbors by color."""
    s = problem.size
    table = np.zeros((s, problem.k + 1), dtype=np.int64)
    for v, colors in enumerate(problem.exterior_colors):
        for c in colors:
            table[v, c] += 1
    return table


def solve_nrs(
    problem: ComponentProblem, max_iterations: int = 1_000_000
) -> tuple[np.ndarray, np.ndarray, int]:
    """Redraw the component until nothing in it is bad.

    Badness is evaluated exactly as the full-graph check would: conflict
    counts combine in-component neighbors (fresh values) with frozen
    external neighbors, and the softness threshold of vertex v uses its
    ambient degree. Returns (colors, label values, iterations).
    """
    s = problem.size
    k = problem.k
    gamma = problem.gamma
    sub = problem.subgraph
    src, dst = sub.edge_src, sub.indices
    passive_cut = gamma ** problem.ambient_degrees.astype(float)
    ext_table = _exterior_table(problem)
    rows = np.arange(s)
    stream = problem.stream
    for it in range(1, max_iterations + 1):
        colors = stream.colors(k, s)
        uniforms = stream.open_uniform(s)
        lively = uniforms > passive_cut
        hits = (colors[src] == colors[dst]) & lively[dst]
        conflicts = np.bincount(src[hits], minlength=s) if src.size else np.zeros(s, dtype=np.int64)
        conflicts = conflicts + ext_table[rows, colors]
        if (uniforms <= gamma ** conflicts.astype(float)).all():
            return colors, uniforms, it
    raise BudgetExhaustedError(
        f"component rejection budget ({max_iterations}) exhausted; "
        f"k={k} against component max degree {sub.max_degree}",
        None,
    )


def _run_bounding_chain(
    graph: Graph, k: int, slots: list, horizon: int
) -> np.ndarray | None:
    """Apply ``horizon`` bounded Gibbs updates ending at time zero.

    ``slots[i]`` carries the randomness of absolute time -(i+1) as a
    pair (vertex, color permutation). Bounds start as the full color
    set. Returns the coalesced coloring, or None if any bound is still
    ambiguous at time zero.
    """
    n = graph.n
    full = frozenset(range(1, k + 1))
    bounds: list[frozenset] = [full] * n
    for i in range(horizon - 1, -1, -1):
        v, perm = slots[i]
        neigh = graph.neighbors(v)
        blocked = set()
        union = set()
        for w in neigh:
            bw = bounds[int(w)]
            if len(bw) == 1:
                blocked.update(bw)
            union.update(bw)
        budget = min(k, len(neigh) + 1)
        kept = []
        scanned = 0
        for c in perm:
            c = int(c)
            scanned += 1
            if c in blocked:
                if scanned >= budget:
                    break
                continue
            kept.append(c)
            if c not in union or scanned >= budget:
                break
        if not kept:
            raise SolverTimeoutError(
                "bounding chain degenerated to an empty candidate set; "
                "the component is too constrained for coupled recoloring"
            )
        bounds[v] = frozenset(kept)
    if all(len(b) == 1 for b in bounds):
        return np.array([next(iter(b)) for b in bounds], dtype=np.int64)
    return None


def _solve_cftp(
    problem: ComponentProblem, systematic: bool, max_epochs: int
) -> np.ndarray:
    sub = problem.subgraph
    k = problem.k
    if k < sub.max_degree + 2:
        raise SolverTimeoutError(
            f"coupled recoloring needs k >= component max degree + 2 "
            f"(k={k}, max degree {sub.max_degree}); single-site moves "
            "may be frozen and the coupling could never resolve"
        )
    gen = problem.stream.generator()
    slots: list[tuple[int, np.ndarray]] = []

    def extend(upto: int):
        while len(slots) < upto:
            i = len(slots)
            v = i % sub.n if systematic else int(gen.integers(sub.n))
            slots.append((v, gen.permutation(k) + 1))

    horizon = 1
    for _ in range(max_epochs):
        extend(horizon)
        colors = _run_bounding_chain(sub, k, slots, horizon)
        if colors is not None:
            src, dst = sub.edge_src, sub.indices
            if src.size and (colors[src] == colors[dst]).any():
                raise SolverTimeoutError(
                    "coupled recoloring produced a conflicting assignment; "
                    "this indicates a defect in the bounding chain"
                )
            return colors
        horizon *= 2
    raise SolverTimeoutError(
        f"coupling did not resolve within {max_epochs} doubling epochs "
        f"(final window {horizon})"
    )


def solve_cftp_huber(problem: ComponentProblem, max_epochs: int = 16) -> np.ndarray:
    """Exactly uniform proper coloring of the component subgraph via a
    random-scan bounding chain run from the past."""
    return _solve_cftp(problem, systematic=False, max_epochs=max_epochs)


def solve_cftp_sweep(problem: ComponentProblem, max_epochs: int = 16) -> np.ndarray:
    """Systematic-scan variant of the bounding-chain coupler."""
    return _solve_cftp(problem, systematic=True, max_epochs=max_epochs)


def fallback_problem(problem: ComponentProblem, tag: int) -> ComponentProblem:
    """Clone a problem onto a fresh child stream for a retry with a
    different solver, keeping runs reproducible."""
    return replace(problem, stream=problem.stream.child(tag))
