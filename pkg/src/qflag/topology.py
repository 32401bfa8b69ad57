"""Posets, order complexes and mod-2 homology.

A connectivity preorder condensed to its partial order is a finite T0 space;
its weak homotopy type is that of the order complex, whose simplices are
the chains. Betti numbers are computed over the two-element field.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from qflag import _kernels
from qflag.errors import CeilingExceeded, InvariantViolation
from qflag.flagcomplex import DirectedFlagComplex
from qflag.simplicial import SimplicialComplexView

DEFAULT_CHAIN_CEILING = 10**6
# dense boundary matrices above this many entries go through the sparse path
_DENSE_LIMIT = 50_000_000


class Poset:
    """Finite partial order given by generating (e.g. Hasse) edges.

    Parameters
    ----------
    num_elements : int
        Elements are ``0..num_elements-1``.
    edges : iterable of (int, int)
        ``(a, b)`` means ``a < b``. The edge set must be acyclic; it need not
        be transitively reduced.
    labels : list, optional
        Display names per element.
    """

    def __init__(self, num_elements: int, edges=(), labels=None):
        self.num_elements = int(num_elements)
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64).reshape(-1, 2)
        if len(arr):
            arr = np.unique(arr, axis=0)
            if (arr[:, 0] == arr[:, 1]).any():
                raise ValueError("a strict order has no loops")
        self.edges = arr
        self.labels = labels
        self._succ = [[] for _ in range(self.num_elements)]
        for a, b in arr.tolist():
            self._succ[a].append(b)
        self.topological_order = _topological_order(self.num_elements, self._succ)
        self._up = None

    @classmethod
    def from_condensation(cls, c) -> "Poset":
        labels = [tuple(c.member_simplices(x)) for x in range(c.num_nodes)]
        return cls(c.num_nodes, np.column_stack([c.src, c.dst]), labels=labels)

    def successors(self, a: int) -> list[int]:
        return self._succ[a]

    def up_sets(self) -> list[int]:
        """Strict up-set of each element as an int bitset."""
        if self._up is None:
            up = [0] * self.num_elements
            for a in reversed(self.topological_order):
                bits = 0
                for b in self._succ[a]:
                    bits |= (1 << b) | up[b]
                up[a] = bits
            self._up = up
        return self._up

    def less_than(self, a: int, b: int) -> bool:
        return bool(self.up_sets()[a] >> b & 1)

    def comparable_pairs(self) -> int:
        return sum(bin(u).count("1") for u in self.up_sets())

    def __repr__(self):
        return f"Poset(num_elements={self.num_elements}, edges={len(self.edges)})"


def _topological_order(n, succ):
    indeg = [0] * n
    for lst in succ:
        for b in lst:
            indeg[b] += 1
    stack = [v for v in range(n - 1, -1, -1) if indeg[v] == 0]
    order = []
    while stack:
        v = stack.pop()
        order.append(v)
        for b in reversed(succ[v]):
            indeg[b] -= 1
            if indeg[b] == 0:
                stack.append(b)
    if len(order) != n:
        raise InvariantViolation("order relation contains a cycle")
    return order


def poset_height(p: Poset) -> int:
    """Number of edges in a longest chain."""
    best = [0] * p.num_elements
    for a in reversed(p.topological_order):
        for b in p.successors(a):
            if best[b] + 1 > best[a]:
                best[a] = best[b] + 1
    return max(best, default=0)


def order_complex(p: Poset, max_dim: int | None = None, ceiling: int = DEFAULT_CHAIN_CEILING) -> SimplicialComplexView:
    """Simplicial complex of chains of ``p``, vertices are element ids."""
    up = p.up_sets()
    top = p.num_elements if max_dim is None else max_dim
    levels: list[list[tuple]] = [[] for _ in range(top + 1)]
    total = 0

    def bits(mask):
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    for start in range(p.num_elements):
        stack = [((start,), up[start])]
        while stack:
            chain, mask = stack.pop()
            levels[len(chain) - 1].append(tuple(sorted(chain)))
            total += 1
            if total > ceiling:
                raise CeilingExceeded(f"more than {ceiling} chains", [len(lv) for lv in levels if lv])
            if len(chain) - 1 < top:
                for b in bits(mask):
                    stack.append((chain + (b,), up[b]))
    arrays = []
    for d, lv in enumerate(levels):
        if d > 0 and not lv:
            break
        arrays.append(np.array(sorted(lv), dtype=np.int32).reshape(-1, d + 1))
    return SimplicialComplexView(arrays)


@dataclass
class ChainComplexZ2:
    """Boundary matrices of a simplicial complex over the field with two elements.

    ``boundaries[d]`` maps d-chains to (d-1)-chains, shape ``(n_{d-1}, n_d)``;
    index 0 is a placeholder zero map.
    """

    counts: list[int]
    boundaries: list = field(repr=False)

    @classmethod
    def from_complex(cls, k, up_to: int | None = None) -> "ChainComplexZ2":
        """Build from an unordered view or an ordered (directed flag) complex.

        Ordered simplices on the same vertex set stay distinct cells.
        """
        top = k.dim if up_to is None else min(k.dim, up_to + 1)
        counts = k.counts[: top + 1] if top >= 0 else []
        mats = [sp.csc_matrix((0, counts[0] if counts else 0), dtype=np.uint8)]
        for d in range(1, top + 1):
            ids = _face_rows(k, d)
            if (ids < 0).any():
                raise InvariantViolation("complex is not closed under faces")
            n = len(ids)
            cols = np.repeat(np.arange(n), d + 1)
            data = np.ones(n * (d + 1), dtype=np.uint8)
            mats.append(sp.csc_matrix((data, (ids.ravel(), cols)), shape=(counts[d - 1], n)))
        return cls(counts, mats)

    def boundary(self, d: int):
        return self.boundaries[d]

    def composition_vanishes(self) -> bool:
        """True iff every composite of consecutive boundary maps is zero mod 2."""
        for d in range(2, len(self.boundaries)):
            prod = (self.boundaries[d - 1].astype(np.int64) @ self.boundaries[d].astype(np.int64)).tocoo()
            if np.any(prod.data % 2):
                return False
        return True

    def rank(self, d: int) -> int:
        if d <= 0 or d >= len(self.boundaries):
            return 0
        return gf2_rank_sparse(self.boundaries[d])


def _face_rows(k, d: int) -> np.ndarray:
    if isinstance(k, DirectedFlagComplex):
        return k.face_ids(d)
    pos = np.array([[c for c in range(d + 1) if c != i] for i in range(d + 1)], dtype=np.int32)
    return _kernels.lookup_subfaces(k.array(d), pos, k.array(d - 1))


def gf2_rank_sparse(mat) -> int:
    """Rank over GF(2); dense kernel when it fits, column bitsets otherwise."""
    m, n = mat.shape
    if m == 0 or n == 0:
        return 0
    if m * n <= _DENSE_LIMIT:
        dense = np.asarray(mat.todense(), dtype=np.uint8) & 1
        return _kernels.gf2_rank(dense.T if n < m else dense)
    csc = sp.csc_matrix(mat)
    pivots: dict[int, int] = {}
    rank = 0
    for c in range(n):
        rows = csc.indices[csc.indptr[c]:csc.indptr[c + 1]]
        vals = csc.data[csc.indptr[c]:csc.indptr[c + 1]]
        bits = 0
        for r, v in zip(rows.tolist(), vals.tolist()):
            if v & 1:
                bits ^= 1 << r
        while bits:
            t = bits.bit_length() - 1
            if t in pivots:
                bits ^= pivots[t]
            else:
                pivots[t] = bits
                rank += 1
                break
    return rank


def betti_z2(k, up_to: int | None = None) -> list[int]:
    """Unreduced Betti numbers over GF(2) for dimensions ``0..up_to``.

    ``k`` is a :class:`SimplicialComplexView` or a directed flag complex;
    the latter is treated as the ordered complex it is.
    """
    if k.dim < 0:
        return [0]
    top = k.dim if up_to is None else up_to
    chains = ChainComplexZ2.from_complex(k, up_to=top)
    counts = k.counts
    ranks = [chains.rank(d) for d in range(top + 2)]
    out = []
    for d in range(top + 1):
        n_d = counts[d] if d < len(counts) else 0
        out.append(n_d - ranks[d] - ranks[d + 1])
    return out


def euler_from_betti(betti) -> int:
    return sum((-1) ** d * b for d, b in enumerate(betti))
