"""Unordered simplicial complexes (vertex order forgotten)."""

from __future__ import annotations

import itertools
from typing import Iterable

import numpy as np

from qflag.errors import CeilingExceeded

DEFAULT_CLOSURE_CEILING = 10**7


def _sorted_level(rows, width):
    arr = np.array(sorted(set(rows)), dtype=np.int32).reshape(-1, width)
    return arr


class SimplicialComplexView:
    """A simplicial complex stored as per-dimension sorted vertex tuples.

    Each level ``d`` is a lexicographically sorted ``(n_d, d + 1)`` int32
    array whose rows are increasing vertex tuples. Use the ``from_*``
    constructors; they close the input under taking subsets.
    """

    def __init__(self, levels):
        arrays = [np.ascontiguousarray(a, dtype=np.int32).reshape(-1, d + 1) for d, a in enumerate(levels)]
        while len(arrays) > 1 and len(arrays[-1]) == 0:
            arrays.pop()
        if not arrays:
            arrays = [np.empty((0, 1), dtype=np.int32)]
        self._levels = arrays
        self._index: dict[int, dict] = {}
        self._tuples: dict[int, list] = {}

    @classmethod
    def from_simplices(cls, simplices: Iterable[Iterable[int]], ceiling: int = DEFAULT_CLOSURE_CEILING):
        """Close a collection of vertex sets under non-empty subsets."""
        levels: list[set] = []
        total = 0
        seen_max: set = set()
        for s in simplices:
            top = tuple(sorted(set(int(v) for v in s)))
            if not top or top in seen_max:
                continue
            seen_max.add(top)
        for top in seen_max:
            for k in range(1, len(top) + 1):
                while len(levels) < k:
                    levels.append(set())
                before = len(levels[k - 1])
                levels[k - 1].update(itertools.combinations(top, k))
                total += len(levels[k - 1]) - before
                if total > ceiling:
                    raise CeilingExceeded(
                        f"subset closure exceeds {ceiling} simplices", [len(lv) for lv in levels]
                    )
        return cls([_sorted_level(lv, d + 1) for d, lv in enumerate(levels)])

    @classmethod
    def from_directed(cls, complex_) -> "SimplicialComplexView":
        """Forget vertex order; ordered simplices on one vertex set merge."""
        levels = []
        for d in range(complex_.dim + 1):
            arr = np.sort(complex_.simplices(d), axis=1)
            levels.append(np.unique(arr, axis=0) if len(arr) else arr)
        return cls(levels)

    @property
    def dim(self) -> int:
        if len(self._levels) == 1 and len(self._levels[0]) == 0:
            return -1
        return len(self._levels) - 1

    @property
    def counts(self) -> list[int]:
        return [len(a) for a in self._levels]

    @property
    def vertices(self) -> list[int]:
        return [int(v) for v in self._levels[0][:, 0]]

    def array(self, d: int) -> np.ndarray:
        if 0 <= d < len(self._levels):
            return self._levels[d]
        return np.empty((0, max(d, 0) + 1), dtype=np.int32)

    def simplices(self, d: int) -> list[tuple[int, ...]]:
        if d not in self._tuples:
            self._tuples[d] = [tuple(r) for r in self.array(d).tolist()]
        return self._tuples[d]

    def all_simplices(self, min_dim: int = 0) -> list[tuple[int, ...]]:
        """Simplices of dimension >= ``min_dim``, ordered by (dimension, lex)."""
        out = []
        for d in range(max(min_dim, 0), self.dim + 1):
            out.extend(self.simplices(d))
        return out

    def index_of(self, s) -> int | None:
        key = tuple(sorted(s))
        d = len(key) - 1
        if d < 0 or d > self.dim:
            return None
        if d not in self._index:
            self._index[d] = {t: k for k, t in enumerate(self.simplices(d))}
        return self._index[d].get(key)

    def __contains__(self, s):
        return self.index_of(s) is not None

    def __len__(self):
        return sum(self.counts)

    def __iter__(self):
        return iter(self.all_simplices())

    def skeleton(self, k: int) -> "SimplicialComplexView":
        return SimplicialComplexView(self._levels[: k + 1])

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * n for d, n in enumerate(self.counts))

    def maximal_simplices(self) -> list[tuple[int, ...]]:
        out = []
        for d in range(self.dim + 1):
            if d == self.dim:
                out.extend(self.simplices(d))
                continue
            covered = set()
            for s in self.simplices(d + 1):
                covered.update(itertools.combinations(s, d + 1))
            out.extend(s for s in self.simplices(d) if s not in covered)
        return out

    def __eq__(self, other):
        if not isinstance(other, SimplicialComplexView):
            return NotImplemented
        a, b = self._levels, other._levels
        return len(a) == len(b) and all(np.array_equal(x, y) for x, y in zip(a, b))

    def __repr__(self):
        return f"SimplicialComplexView(counts={self.counts})"
