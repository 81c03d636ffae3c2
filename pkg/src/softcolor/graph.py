"""Simple undirected graphs and the generator families used throughout.

Graphs are immutable once built. Internally the adjacency structure is
kept twice: as a tuple of sorted neighbor tuples (convenient for BFS and
hand inspection) and as CSR-style numpy arrays (used by the vectorized
state predicates). Vertices are 0-based consecutive integers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import FormatError, ParameterError
from .rng import TAG_GRAPH, RandomStream

__all__ = [
    "Graph",
    "from_edges",
    "cycle_graph",
    "grid_graph",
    "complete_graph",
    "petersen_graph",
    "random_regular_graph",
    "load_edge_list",
    "parse_family",
    "family_graph",
]


@dataclass(frozen=True)
class Graph:
    """An immutable simple undirected graph.

    Parameters
    ----------
    n : int
        Number of vertices (0..n-1). Isolated vertices are allowed.
    adjacency : tuple[tuple[int, ...], ...]
        Sorted neighbor lists, one per vertex, no self-loops, no repeats.
    """

    n: int
    adjacency: tuple[tuple[int, ...], ...]
    label: str = "graph"
    # CSR mirrors of the adjacency, filled in __post_init__.
    indptr: np.ndarray = field(init=False, repr=False, compare=False)
    indices: np.ndarray = field(init=False, repr=False, compare=False)
    edge_src: np.ndarray = field(init=False, repr=False, compare=False)
    degrees: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0 or len(self.adjacency) != self.n:
            raise ParameterError("adjacency length must equal n")
        degs = np.array([len(a) for a in self.adjacency], dtype=np.int64)
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(degs, out=indptr[1:])
        flat = np.fromiter(
            (w for adj in self.adjacency for w in adj), dtype=np.int64, count=int(indptr[-1])
        )
        src = np.repeat(np.arange(self.n, dtype=np.int64), degs)
        object.__setattr__(self, "degrees", degs)
        object.__setattr__(self, "indptr", indptr)
        object.__setattr__(self, "indices", flat)
        object.__setattr__(self, "edge_src", src)

    @property
    def edge_count(self) -> int:
        return int(self.indices.size // 2)

    @property
    def max_degree(self) -> int:
        return int(self.degrees.max()) if self.n else 0

    def degree(self, v: int) -> int:
        return int(self.degrees[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def edges(self) -> list[tuple[int, int]]:
        """Each edge once, as (u, w) with u < w, lexicographically sorted."""
        return [
            (int(u), int(w))
            for u in range(self.n)
            for w in self.adjacency[u]
            if u < w
        ]

    def induced_subgraph(self, vertices) -> tuple["Graph", np.ndarray]:
        """The subgraph induced on ``vertices``.

        Returns the new graph (vertices relabeled 0..s-1 in ascending
        order of their original ids) together with the array mapping
        local index -> original vertex id.
        """
        verts = np.unique(np.asarray(list(vertices), dtype=np.int64))
        if verts.size and (verts[0] < 0 or verts[-1] >= self.n):
            raise ParameterError("induced vertex set out of range")
        local = {int(v): i for i, v in enumerate(verts)}
        adj = tuple(
            tuple(local[w] for w in self.adjacency[v] if w in local) for v in verts
        )
        return Graph(len(verts), adj, label=f"{self.label}[induced:{len(verts)}]"), verts


def from_edges(n: int, edges, label: str = "custom") -> Graph:
    """Build a graph on vertices 0..n-1 from an iterable of edge pairs.

    Duplicate edges collapse; self-loops are rejected.
    """
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for u, w in edges:
        if u == w:
            raise ParameterError(f"self-loop at vertex {u}")
        nbrs[u].add(w)
        nbrs[w].add(u)
    return Graph(n, tuple(tuple(sorted(s)) for s in nbrs), label=label)


_from_edges = from_edges


def cycle_graph(n: int) -> Graph:
    """The cycle on n >= 3 vertices."""
    if n < 3:
        raise ParameterError("cycle needs at least 3 vertices")
    return _from_edges(n, [(i, (i + 1) % n) for i in range(n)], f"cycle:{n}")


def grid_graph(m: int) -> Graph:
    """The m-by-m square lattice (vertex (r, c) is index r*m + c)."""
    if m < 2:
        raise ParameterError("grid needs side length at least 2")
    edges = []
    for r in range(m):
        for c in range(m):
            v = r * m + c
            if c + 1 < m:
                edges.append((v, v + 1))
            if r + 1 < m:
                edges.append((v, v + m))
    return _from_edges(m * m, edges, f"grid:{m}")


def complete_graph(n: int) -> Graph:
    """The complete graph on n >= 2 vertices."""
    if n < 2:
        raise ParameterError("complete graph needs at least 2 vertices")
    return _from_edges(
        n, [(u, w) for u in range(n) for w in range(u + 1, n)], f"complete:{n}"
    )


def petersen_graph() -> Graph:
    """Outer 5-cycle, inner pentagram, spokes joining the two."""
    edges = [(i, (i + 1) % 5) for i in range(5)]
    edges += [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    edges += [(i, i + 5) for i in range(5)]
    return _from_edges(10, edges, "petersen")


def random_regular_graph(n: int, d: int, seed: int) -> Graph:
    """A uniformly random simple d-regular graph on n vertices.

    Uses the pairing model: pair up n*d stubs uniformly at random and
    restart from scratch whenever the pairing contains a self-loop or a
    repeated edge. Conditioned on acceptance the result is uniform over
    simple d-regular graphs, at the cost of a retry loop whose expected
    length grows with d (harmless for the small d used here).
    """
    if n <= d:
        raise ParameterError("need n > d for a simple d-regular graph")
    if d < 1:
        raise ParameterError("degree must be positive")
    if (n * d) % 2 != 0:
        raise ParameterError("n*d must be even")
    gen = RandomStream(seed).child(TAG_GRAPH).generator()
    stubs = np.repeat(np.arange(n, dtype=np.int64), d)
    while True:
        perm = gen.permutation(stubs)
        u, w = perm[0::2], perm[1::2]
        if (u == w).any():
            continue
        lo, hi = np.minimum(u, w), np.maximum(u, w)
        keys = lo * n + hi
        if np.unique(keys).size != keys.size:
            continue
        return _from_edges(
            n, list(zip(lo.tolist(), hi.tolist())), f"random-regular:{n}:{d}:{seed}"
        )


def load_edge_list(text: str, label: str = "edge-list") -> Graph:
    """Parse the plain-text edge list format.

    One edge per line as two 0-based vertex indices separated by
    whitespace. Blank lines and lines starting with '#' are ignored.
    The vertex count is 1 + the largest index mentioned. Repeated edges
    collapse; self-loops are rejected.
    """
    edges: list[tuple[int, int]] = []
    top = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(
                f"line {lineno}: expected two vertex indices, got {len(parts)} fields",
                position=lineno,
            )
        try:
            u, w = int(parts[0]), int(parts[1])
        except ValueError:
            raise FormatError(
                f"line {lineno}: vertex indices must be integers", position=lineno
            ) from None
        if u < 0 or w < 0:
            raise FormatError(
                f"line {lineno}: vertex indices must be non-negative", position=lineno
            )
        if u == w:
            raise FormatError(f"line {lineno}: self-loop at vertex {u}", position=lineno)
        top = max(top, u, w)
        edges.append((u, w))
    if top < 0:
        raise FormatError("edge list contains no edges", position=0)
    return _from_edges(top + 1, edges, label)


def parse_family(spec: str, seed: int = 0) -> Graph:
    """Build a graph from a family descriptor string.

    Grammar: ``cycle:N``, ``grid:M``, ``complete:N``, ``petersen``,
    ``random-regular:N:D``. The random family derives its own seed from
    ``seed`` so the same descriptor and seed always give the same graph.
    """
    parts = spec.strip().lower().split(":")
    name, args = parts[0], parts[1:]

    def want(count: int):
        if len(args) != count:
            raise ParameterError(
                f"family '{name}' takes {count} integer argument(s), got {len(args)}"
            )
        try:
            return [int(a) for a in args]
        except ValueError:
            raise ParameterError(f"family arguments must be integers: {spec!r}") from None

    if name == "cycle":
        return cycle_graph(*want(1))
    if name == "grid":
        return grid_graph(*want(1))
    if name == "complete":
        return complete_graph(*want(1))
    if name == "petersen":
        want(0)
        return petersen_graph()
    if name == "random-regular":
        n, d = want(2)
        return random_regular_graph(n, d, seed)
    raise ParameterError(f"unknown graph family {name!r}")


# Backwards-friendly alias used by the experiment specs.
family_graph = parse_family
