"""Deterministic, splittable random streams.

Every stochastic routine in this package draws from a RandomStream: a
64-bit master seed plus a path of integer labels. Child streams are
derived by extending the path, and the (seed, path) pair is hashed into
a Philox generator via numpy's SeedSequence. Two consequences matter:

* the same seed and path always reproduce the same draws, regardless of
  what other streams were consumed in between, and
* streams with distinct paths are statistically independent, so work
  can be farmed out to threads in any order without changing results.

Path labels are small non-negative integers. The first label encodes
what the stream is for (see the TAG_* constants); later labels carry
indices such as level, sweep and component id.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "RandomStream",
    "TAG_INIT",
    "TAG_SWEEP",
    "TAG_COMPONENT",
    "TAG_GRAPH",
    "TAG_FALLBACK",
    "TAG_CELL",
    "TAG_ORACLE",
]

TAG_INIT = 0
TAG_SWEEP = 1
TAG_COMPONENT = 2
TAG_GRAPH = 3
TAG_FALLBACK = 4
TAG_CELL = 5
TAG_ORACLE = 6

_MASK64 = (1 << 64) - 1
_MASK32 = (1 << 32) - 1


@dataclass(frozen=True)
class RandomStream:
    """A lazily instantiated Philox generator addressed by (seed, path)."""

    seed: int
    path: tuple[int, ...] = ()
    _gen: list = field(default_factory=list, repr=False, compare=False)

    def __post_init__(self):
        if not 0 <= self.seed <= _MASK64:
            raise ValueError("seed must fit in 64 bits")
        for label in self.path:
            if not 0 <= label <= _MASK32:
                raise ValueError("path labels must be uint32 values")

    def child(self, *labels: int) -> "RandomStream":
        """Derive an independent stream by extending the path."""
        return RandomStream(self.seed, self.path + tuple(int(x) for x in labels))

    def generator(self) -> np.random.Generator:
        """The stream's generator; repeated calls return the same object."""
        if not self._gen:
            ss = np.random.SeedSequence(self.seed, spawn_key=self.path)
            self._gen.append(np.random.Generator(np.random.Philox(ss)))
        return self._gen[0]

    def open_uniform(self, size: int) -> np.ndarray:
        """Uniform draws from the open interval (0, 1).

        numpy's random() covers [0, 1); exact zeros are redrawn so the
        acceptance predicates never see a boundary value.
        """
        gen = self.generator()
        u = gen.random(size)
        while True:
            zero = u == 0.0
            if not zero.any():
                return u
            u[zero] = gen.random(int(zero.sum()))

    def colors(self, k: int, size: int) -> np.ndarray:
        """Uniform color labels from 1..k inclusive."""
        return self.generator().integers(1, k, size=size, endpoint=True)
