"""Directed flag complexes and ordered-simplex face machinery.

Ordered simplices are plain tuples of distinct vertex ids ``(v0, ..., vn)``;
``v0`` is the source and ``vn`` the sink. A complex stores one
lexicographically sorted ``(count, d + 1)`` int32 array per dimension, so a
simplex is addressed either by its tuple or by ``(dim, row)``.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterator

import numpy as np

from qflag import _kernels
from qflag.digraph import Digraph
from qflag.errors import CeilingExceeded

DEFAULT_CEILING = 10**8

Simplex = tuple[int, ...]


class _EmptyFace:
    """The (-1)-simplex produced by removing the only vertex of a 0-simplex.

    It contains no q-face for any q >= 0.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "EmptyFace"

    def __len__(self):
        return 0

    def __bool__(self):
        return False

    def __reduce__(self):
        return (_EmptyFace, ())


EMPTY_FACE = _EmptyFace()


def dim(s) -> int:
    return len(s) - 1


def face(s: Simplex, i: int) -> Simplex:
    """The face map ``d_i``: drop the vertex at position ``i``."""
    n = len(s) - 1
    if n < 1:
        raise ValueError("face maps need a simplex of dimension >= 1")
    if not 0 <= i <= n:
        raise ValueError(f"face index {i} out of range for a {n}-simplex")
    return tuple(s[:i]) + tuple(s[i + 1:])


def face_hat(s: Simplex, i: int):
    """Drop the vertex at position ``min(i, dim(s))``.

    Defined in every dimension: indices past the sink remove the sink, and a
    0-simplex maps to :data:`EMPTY_FACE`.
    """
    if i < 0:
        raise ValueError("face index must be non-negative")
    n = len(s) - 1
    if n <= 0:
        return EMPTY_FACE
    k = min(i, n)
    return tuple(s[:k]) + tuple(s[k + 1:])


def is_face(a, b) -> bool:
    """True iff ``a`` is an order-preserving subsequence of ``b``.

    Every simplex is a face of itself. The empty face is never reported as
    a face, matching its role in directed nearness.
    """
    if a is EMPTY_FACE or b is EMPTY_FACE or len(a) == 0:
        return False
    if len(a) > len(b):
        return False
    it = iter(b)
    return all(v in it for v in a)


@lru_cache(maxsize=None)
def subsequence_positions(length: int, k: int) -> np.ndarray:
    """All increasing ``k``-subsets of ``range(length)`` as a ``(C, k)`` array."""
    combos = list(itertools.combinations(range(length), k))
    if not combos:
        return np.empty((0, k), dtype=np.int32)
    return np.array(combos, dtype=np.int32).reshape(-1, k)


class DirectedFlagComplex:
    """All directed cliques of a digraph, stored per dimension.

    Parameters
    ----------
    simplices : list of ndarray
        ``simplices[d]`` is a lexicographically sorted ``(n_d, d + 1)`` array.
    digraph : Digraph, optional
        Source graph, kept for reference.
    """

    def __init__(self, simplices, digraph: Digraph | None = None):
        arrays = [np.ascontiguousarray(a, dtype=np.int32).reshape(-1, d + 1) for d, a in enumerate(simplices)]
        while len(arrays) > 1 and len(arrays[-1]) == 0:
            arrays.pop()
        if not arrays:
            arrays = [np.empty((0, 1), dtype=np.int32)]
        self._simplices = arrays
        self.digraph = digraph
        self._index: dict[int, dict] = {}
        self._cofaces: dict[int, tuple] = {}
        self._faces: dict[int, np.ndarray] = {}

    @property
    def dim(self) -> int:
        """Top dimension; -1 for the empty complex."""
        if len(self._simplices) == 1 and len(self._simplices[0]) == 0:
            return -1
        return len(self._simplices) - 1

    @property
    def counts(self) -> list[int]:
        return [len(a) for a in self._simplices]

    def simplices(self, d: int) -> np.ndarray:
        if 0 <= d < len(self._simplices):
            return self._simplices[d]
        return np.empty((0, max(d, 0) + 1), dtype=np.int32)

    def simplex(self, d: int, row: int) -> Simplex:
        return tuple(int(v) for v in self._simplices[d][row])

    def __len__(self):
        return sum(self.counts)

    def __iter__(self) -> Iterator[Simplex]:
        for arr in self._simplices:
            for row in arr.tolist():
                yield tuple(row)

    def index_of(self, s) -> int | None:
        """Row of ``s`` within its dimension, or None if absent."""
        d = len(s) - 1
        if d < 0 or d >= len(self._simplices):
            return None
        if d not in self._index:
            self._index[d] = {tuple(r): k for k, r in enumerate(self._simplices[d].tolist())}
        return self._index[d].get(tuple(s))

    def __contains__(self, s):
        return s is not EMPTY_FACE and self.index_of(s) is not None

    def face_ids(self, d: int) -> np.ndarray:
        """``(n_d, d + 1)`` array; column ``i`` is the row of ``d_i`` of each simplex."""
        if d < 1:
            raise ValueError("faces exist only for dimension >= 1")
        if d not in self._faces:
            # column i of positions drops vertex i
            pos = np.array([[c for c in range(d + 1) if c != i] for i in range(d + 1)], dtype=np.int32)
            self._faces[d] = _kernels.lookup_subfaces(self.simplices(d), pos, self.simplices(d - 1))
        return self._faces[d]

    def coface_index(self, d: int) -> tuple[np.ndarray, np.ndarray]:
        """CSR map from each ``(d-1)``-simplex to the ``d``-simplices containing it."""
        if d not in self._cofaces:
            nf = len(self.simplices(d - 1))
            ids = self.face_ids(d)
            owners = np.repeat(np.arange(len(ids), dtype=np.int64), d + 1)
            flat = ids.ravel()
            order = np.argsort(flat, kind="stable")
            indptr = np.zeros(nf + 1, dtype=np.int64)
            np.cumsum(np.bincount(flat, minlength=nf), out=indptr[1:])
            self._cofaces[d] = (indptr, owners[order])
        return self._cofaces[d]

    def cofaces(self, s) -> list[Simplex]:
        """Simplices one dimension up that have ``s`` as a face."""
        d = len(s)
        k = self.index_of(s)
        if k is None or d >= len(self._simplices):
            return []
        indptr, idx = self.coface_index(d)
        return [self.simplex(d, int(r)) for r in idx[indptr[k]:indptr[k + 1]]]

    def is_maximal(self, s) -> bool:
        return not self.cofaces(s)

    def to_text(self) -> str:
        """Text export: a ``dim k`` header then one simplex per line."""
        out = []
        for d, arr in enumerate(self._simplices):
            out.append(f"dim {d}")
            out.extend(" ".join(map(str, row)) for row in arr.tolist())
        return "\n".join(out) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "DirectedFlagComplex":
        levels: list[list[list[int]]] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("dim"):
                d = int(line.split()[1])
                if d != len(levels):
                    raise ValueError(f"line {lineno}: expected dim {len(levels)}, got {d}")
                levels.append([])
                continue
            if not levels:
                raise ValueError(f"line {lineno}: simplex before any dim header")
            row = [int(t) for t in line.split()]
            if len(row) != len(levels):
                raise ValueError(f"line {lineno}: expected {len(levels)} vertices")
            levels[-1].append(row)
        arrays = [np.array(rows, dtype=np.int32).reshape(-1, d + 1) for d, rows in enumerate(levels)]
        for d, arr in enumerate(arrays):
            if len(arr) > 1:
                order = np.lexsort(arr.T[::-1])
                arrays[d] = arr[order]
        return cls(arrays)

    def save(self, path) -> None:
        """Binary cache (``.npz``); :meth:`load` restores it exactly."""
        np.savez_compressed(path, **{f"dim{d}": a for d, a in enumerate(self._simplices)})

    @classmethod
    def load(cls, path) -> "DirectedFlagComplex":
        with np.load(path) as data:
            arrays = [data[f"dim{d}"] for d in range(len(data.files))]
        return cls(arrays)

    def __eq__(self, other):
        if not isinstance(other, DirectedFlagComplex):
            return NotImplemented
        a, b = self._simplices, other._simplices
        return len(a) == len(b) and all(np.array_equal(x, y) for x, y in zip(a, b))

    def __repr__(self):
        return f"DirectedFlagComplex(counts={self.counts})"


def build_complex(g: Digraph, max_dim: int | None = None, ceiling: int = DEFAULT_CEILING) -> DirectedFlagComplex:
    """Enumerate the directed flag complex of ``g`` up to ``max_dim``.

    Raises
    ------
    CeilingExceeded
        When some dimension holds more than ``ceiling`` simplices; the
        exception carries the counts reached so far.
    """
    if g.num_vertices == 0:
        return DirectedFlagComplex([np.empty((0, 1), dtype=np.int32)], digraph=g)
    arrays = _kernels.enumerate_flag(g.indptr, g.indices, g.num_vertices, max_dim, ceiling)
    return DirectedFlagComplex(arrays, digraph=g)


def simplex_counts(c: DirectedFlagComplex) -> list[int]:
    return c.counts


__all__ = [
    "CeilingExceeded",
    "DEFAULT_CEILING",
    "DirectedFlagComplex",
    "EMPTY_FACE",
    "Simplex",
    "build_complex",
    "dim",
    "face",
    "face_hat",
    "is_face",
    "simplex_counts",
]
