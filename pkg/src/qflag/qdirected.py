"""Directed Q-analysis on ordered simplicial complexes.

For a triple ``(q, i, j)`` an ordered pair of simplices ``(s, t)`` of
dimension at least ``q`` is near when ``s`` is a face of ``t``, or when the
modified faces ``face_hat(s, i)`` and ``face_hat(t, j)`` contain a common
q-simplex. Reachability along near pairs is a preorder on ``K_q``; the
digraph built here holds its generating edges (no loops, no closure).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from qflag import _kernels
from qflag.digraph import Digraph
from qflag.errors import EmptyConnectivityError, InvariantViolation
from qflag.flagcomplex import (
    EMPTY_FACE,
    DirectedFlagComplex,
    build_complex,
    face_hat,
    is_face,
    subsequence_positions,
)


@dataclass(frozen=True)
class ConnectionSpec:
    """A nearness triple: shared face dimension ``q`` and face indices ``i``, ``j``."""

    q: int
    i: int
    j: int

    def __post_init__(self):
        if self.q < 0 or self.i < 0 or self.j < 0:
            raise ValueError(f"invalid connection spec {tuple(self)}")

    def __iter__(self):
        return iter((self.q, self.i, self.j))

    def swapped(self) -> "ConnectionSpec":
        return ConnectionSpec(self.q, self.j, self.i)

    def __str__(self):
        return f"({self.q},{self.i},{self.j})"


def _spec(spec) -> ConnectionSpec:
    return spec if isinstance(spec, ConnectionSpec) else ConnectionSpec(*spec)


def _common_length(a, b) -> int:
    """Longest common subsequence length of two tuples."""
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for k, y in enumerate(b):
            cur.append(prev[k] + 1 if x == y else max(prev[k + 1], cur[k]))
        prev = cur
    return prev[-1]


def directed_q_near(a, b, spec, complex_: DirectedFlagComplex | None = None) -> bool:
    """Evaluate directed nearness of the ordered pair ``(a, b)``.

    Parameters
    ----------
    a, b : tuple of int
        Ordered simplices of dimension at least ``spec.q``.
    spec : ConnectionSpec or (q, i, j)
    complex_ : DirectedFlagComplex, optional
        When given, membership of ``a`` and ``b`` is checked. Common
        subsequences of faces are faces, so the shared q-simplex needs no
        separate lookup.
    """
    q, i, j = _spec(spec)
    a, b = tuple(a), tuple(b)
    if len(a) - 1 < q or len(b) - 1 < q:
        raise ValueError(f"simplices must have dimension >= {q}")
    if complex_ is not None and (a not in complex_ or b not in complex_):
        raise KeyError("simplex not in complex")
    if is_face(a, b):
        return True
    fa, fb = face_hat(a, i), face_hat(b, j)
    if fa is EMPTY_FACE or fb is EMPTY_FACE or len(fa) < q + 1 or len(fb) < q + 1:
        return False
    if len(fa) == q + 1 and len(fb) == q + 1:
        return fa == fb
    return _common_length(fa, fb) >= q + 1


class ConnectivityDigraph:
    """Generating edges of the directed connectivity preorder on ``K_q``.

    Node ids follow (dimension, lex) order over simplices of dimension
    ``q`` and up. ``src``/``dst`` are sorted int64 arrays.
    """

    def __init__(self, complex_: DirectedFlagComplex, spec: ConnectionSpec, src, dst):
        self.complex = complex_
        self.spec = spec
        top = complex_.dim
        self.offsets = np.concatenate(
            [[0], np.cumsum([len(complex_.simplices(d)) for d in range(spec.q, top + 1)])]
        ).astype(np.int64)
        self.src = np.asarray(src, dtype=np.int64)
        self.dst = np.asarray(dst, dtype=np.int64)
        self._csr = None
        self._nodes = None

    @property
    def num_nodes(self) -> int:
        return int(self.offsets[-1])

    @property
    def num_edges(self) -> int:
        return len(self.src)

    def node_simplex(self, n: int) -> tuple:
        d = int(np.searchsorted(self.offsets, n, side="right")) - 1
        return self.complex.simplex(d + self.spec.q, int(n - self.offsets[d]))

    def node_id(self, s) -> int:
        d = len(s) - 1 - self.spec.q
        row = self.complex.index_of(s)
        if d < 0 or row is None:
            raise KeyError(f"{s} is not a node")
        return int(self.offsets[d] + row)

    def node_dim(self, n) -> int:
        return int(np.searchsorted(self.offsets, n, side="right")) - 1 + self.spec.q

    @property
    def nodes(self) -> list:
        if self._nodes is None:
            top = self.complex.dim
            self._nodes = [tuple(r) for d in range(self.spec.q, top + 1) for r in self.complex.simplices(d).tolist()]
        return self._nodes

    def adjacency(self):
        if self._csr is None:
            n = self.num_nodes
            data = np.ones(len(self.src), dtype=np.int8)
            self._csr = sp.csr_matrix((data, (self.src, self.dst)), shape=(n, n))
        return self._csr

    def successors(self, n: int) -> np.ndarray:
        a = self.adjacency()
        return a.indices[a.indptr[n]:a.indptr[n + 1]]

    def edge_set(self) -> set:
        nodes = self.nodes
        return {(nodes[a], nodes[b]) for a, b in zip(self.src.tolist(), self.dst.tolist())}

    def has_edge(self, a, b) -> bool:
        x, y = self.node_id(a), self.node_id(b)
        return y in set(self.successors(x).tolist())

    def to_dot(self) -> str:
        out = [f'digraph "q{self.spec.q}_i{self.spec.i}_j{self.spec.j}" {{']
        for n in range(self.num_nodes):
            out.append(f'  n{n} [label="{_fmt(self.node_simplex(n))}"];')
        for a, b in zip(self.src.tolist(), self.dst.tolist()):
            out.append(f"  n{a} -> n{b};")
        out.append("}")
        return "\n".join(out) + "\n"

    def __repr__(self):
        return f"ConnectivityDigraph(spec={self.spec}, nodes={self.num_nodes}, edges={self.num_edges})"


def _fmt(s) -> str:
    return "(" + ",".join(map(str, s)) + ")"


def _incidence(c: DirectedFlagComplex, q: int, index: int, off) -> sp.csr_matrix:
    """Nodes of ``K_q`` against the q-simplices inside their modified face."""
    table = c.simplices(q)
    rows, cols = [], []
    for d in range(q + 1, c.dim + 1):
        arr = c.simplices(d)
        if not len(arr):
            continue
        drop = min(index, d)
        keep = np.array([p for p in range(d + 1) if p != drop], dtype=np.int32)
        pos = keep[subsequence_positions(d, q + 1)]
        ids = _kernels.lookup_subfaces(arr, pos, table)
        rows.append(np.repeat(np.arange(len(arr), dtype=np.int64) + off[d - q], ids.shape[1]))
        cols.append(ids.ravel())
    n = int(off[-1])
    if not rows:
        return sp.csr_matrix((n, len(table)), dtype=np.int32)
    r, col = np.concatenate(rows), np.concatenate(cols)
    if (col < 0).any():
        raise InvariantViolation("complex is not closed under faces")
    return sp.csr_matrix((np.ones(len(r), dtype=np.int32), (r, col)), shape=(n, len(table)))


def _inclusions(c: DirectedFlagComplex, q: int, off) -> np.ndarray:
    out = []
    for m in range(q + 1, c.dim + 1):
        arr = c.simplices(m)
        if not len(arr):
            continue
        owners = np.arange(len(arr), dtype=np.int64) + off[m - q]
        for k in range(q + 1, m + 1):
            ids = _kernels.lookup_subfaces(arr, subsequence_positions(m + 1, k), c.simplices(k - 1))
            src = ids.ravel() + off[k - 1 - q]
            out.append(np.column_stack([src, np.repeat(owners, ids.shape[1])]))
    return np.concatenate(out) if out else np.empty((0, 2), dtype=np.int64)


def build_connectivity_digraph(c: DirectedFlagComplex, spec) -> ConnectivityDigraph:
    """All near ordered pairs of distinct simplices in ``K_q``.

    Flow pairs come from joining two sparse incidences (modified faces of
    sources and of targets against the q-simplex table); face inclusions are
    listed directly from subsequence lookups.

    Raises
    ------
    EmptyConnectivityError
        When ``q`` exceeds the dimension of the complex.
    """
    spec = _spec(spec)
    q = spec.q
    if q > c.dim:
        raise EmptyConnectivityError(f"no simplices of dimension >= {q} (complex dimension {c.dim})")
    off = np.concatenate([[0], np.cumsum([len(c.simplices(d)) for d in range(q, c.dim + 1)])]).astype(np.int64)
    a = _incidence(c, q, spec.i, off)
    b = a if spec.i == spec.j else _incidence(c, q, spec.j, off)
    flow = (a @ b.T).tocoo()
    parts = [np.column_stack([flow.row.astype(np.int64), flow.col.astype(np.int64)]), _inclusions(c, q, off)]
    e = np.concatenate(parts)
    e = e[e[:, 0] != e[:, 1]]
    n = max(int(off[-1]), 1)
    key = np.unique(e[:, 0] * n + e[:, 1])
    return ConnectivityDigraph(c, spec, key // n, key % n)


class Condensation:
    """Quotient of a connectivity digraph by its strongly connected components.

    Component ids are ordered by smallest member node id. ``src``/``dst``
    hold the deduplicated quotient edges, sorted.
    """

    def __init__(self, graph: ConnectivityDigraph, labels, src, dst):
        self.graph = graph
        self.labels = np.asarray(labels, dtype=np.int64)
        self.src = np.asarray(src, dtype=np.int64)
        self.dst = np.asarray(dst, dtype=np.int64)
        self.num_nodes = int(self.labels.max()) + 1 if len(self.labels) else 0
        order = np.argsort(self.labels, kind="stable")
        bounds = np.searchsorted(self.labels[order], np.arange(self.num_nodes + 1))
        self.members = [order[bounds[x]:bounds[x + 1]] for x in range(self.num_nodes)]
        n = self.num_nodes
        self._csr = sp.csr_matrix((np.ones(len(self.src), dtype=np.int8), (self.src, self.dst)), shape=(n, n))
        self.topological_order = _kahn(n, self._csr)

    @property
    def num_edges(self) -> int:
        return len(self.src)

    def successors(self, x: int) -> np.ndarray:
        return self._csr.indices[self._csr.indptr[x]:self._csr.indptr[x + 1]]

    def predecessors(self, x: int) -> np.ndarray:
        return self.src[self.dst == x]

    def size(self, x: int) -> int:
        return len(self.members[x])

    def member_simplices(self, x: int) -> list:
        return [self.graph.node_simplex(int(n)) for n in self.members[x]]

    def component_of(self, s) -> int:
        return int(self.labels[self.graph.node_id(s)])

    def nontrivial(self) -> list[int]:
        return [x for x in range(self.num_nodes) if len(self.members[x]) > 1]

    def to_dot(self) -> str:
        out = [f'digraph "condensation_q{self.graph.spec.q}_i{self.graph.spec.i}_j{self.graph.spec.j}" {{']
        for x in range(self.num_nodes):
            label = " ".join(_fmt(s) for s in self.member_simplices(x))
            out.append(f'  c{x} [label="{label}"];')
        for a, b in zip(self.src.tolist(), self.dst.tolist()):
            out.append(f"  c{a} -> c{b};")
        out.append("}")
        return "\n".join(out) + "\n"

    def __repr__(self):
        return f"Condensation(nodes={self.num_nodes}, edges={self.num_edges})"


def _kahn(n, csr) -> list[int]:
    indeg = np.bincount(csr.indices, minlength=n).tolist()
    ready = [x for x in range(n - 1, -1, -1) if indeg[x] == 0]
    order = []
    while ready:
        x = ready.pop()
        order.append(x)
        for y in reversed(csr.indices[csr.indptr[x]:csr.indptr[x + 1]].tolist()):
            indeg[y] -= 1
            if indeg[y] == 0:
                ready.append(y)
    if len(order) != n:
        raise InvariantViolation("condensation contains a cycle")
    return order


def condense(g: ConnectivityDigraph) -> Condensation:
    n = g.num_nodes
    if n == 0:
        return Condensation(g, [], [], [])
    _, lab = connected_components(g.adjacency(), directed=True, connection="strong")
    _, first = np.unique(lab, return_index=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(len(first))
    lab = rank[lab]
    a, b = lab[g.src], lab[g.dst]
    keep = a != b
    m = int(lab.max()) + 1
    key = np.unique(a[keep] * m + b[keep])
    return Condensation(g, lab, key // m, key % m)


def summary(g: ConnectivityDigraph, c: Condensation | None = None) -> dict:
    c = condense(g) if c is None else c
    q, i, j = g.spec
    return {
        "q": q,
        "i": i,
        "j": j,
        "nodes": g.num_nodes,
        "edges": g.num_edges,
        "scc_count": c.num_nodes,
        "condensation_edges": c.num_edges,
    }


def summary_json(g: ConnectivityDigraph, c: Condensation | None = None) -> str:
    return json.dumps(summary(g, c), sort_keys=True)


def _maximal(c: DirectedFlagComplex) -> list:
    out = []
    for d in range(c.dim + 1):
        if d == c.dim:
            out.extend(tuple(r) for r in c.simplices(d).tolist())
            continue
        indptr, _ = c.coface_index(d + 1)
        empty = np.flatnonzero(np.diff(indptr) == 0)
        out.extend(c.simplex(d, int(r)) for r in empty)
    return out


def top_flow_digraph(g: ConnectivityDigraph, n: int) -> Digraph:
    """Sub-digraph induced by the n-simplices, relabelled ``0..count-1``."""
    lo, hi = g.offsets[n - g.spec.q], g.offsets[n - g.spec.q + 1]
    keep = (g.src >= lo) & (g.src < hi) & (g.dst >= lo) & (g.dst < hi)
    e = np.column_stack([g.src[keep] - lo, g.dst[keep] - lo])
    return Digraph(int(hi - lo), e)


def top_flow_dimension(g: ConnectivityDigraph, n: int) -> int:
    """Dimension of the directed flag complex of :func:`top_flow_digraph`."""
    return build_complex(top_flow_digraph(g, n), max_dim=2).dim


@dataclass
class DirectedPseudomanifoldCertificate:
    """Outcome of a directed pseudomanifold test along ``(face_hat_i, face_hat_j)``."""

    n: int
    i: int
    j: int
    is_pseudomanifold: bool
    closed: bool
    with_boundary: bool
    boundary: list
    violations: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "i": self.i,
            "j": self.j,
            "is_pseudomanifold": self.is_pseudomanifold,
            "closed": self.closed,
            "with_boundary": self.with_boundary,
            "boundary": [list(s) for s in self.boundary],
            "violations": list(self.violations),
        }


def directed_pseudomanifold_check(c: DirectedFlagComplex, n: int, i: int, j: int) -> DirectedPseudomanifoldCertificate:
    """Test the directed n-pseudomanifold conditions along ``(i, j)``.

    Top simplices must all lie in one strongly connected class of the
    ``(n - 1, i, j)`` connectivity digraph.
    """
    if n < 1:
        raise ValueError("pseudomanifolds are defined for n >= 1")
    violations = []
    for s in _maximal(c):
        if len(s) - 1 != n:
            violations.append(f"maximal simplex {_fmt(s)} has dimension {len(s) - 1}, expected {n}")
    faces = [tuple(r) for r in c.simplices(n - 1).tolist()]
    counts = [0] * len(faces)
    if n <= c.dim and len(c.simplices(n)):
        counts = np.bincount(c.face_ids(n).ravel(), minlength=len(faces)).tolist()
        g = build_connectivity_digraph(c, ConnectionSpec(n - 1, i, j))
        _, lab = connected_components(g.adjacency(), directed=True, connection="strong")
        top = lab[g.offsets[1]:g.offsets[2]]
        if len(np.unique(top)) != 1:
            violations.append(f"{n}-simplices are not mutually ({n - 1},{i},{j})-connected")
    else:
        violations.append(f"no {n}-simplices")
    for s, k in zip(faces, counts):
        if k > 2:
            violations.append(f"{n - 1}-simplex {_fmt(s)} is a face of {k} {n}-simplices")
    boundary = [s for s, k in zip(faces, counts) if k == 1]
    ok = not violations
    closed = ok and all(k == 2 for k in counts)
    return DirectedPseudomanifoldCertificate(n, i, j, ok, closed, ok and bool(boundary), boundary, violations)


def structure_triples(top_dim: int) -> Iterator[ConnectionSpec]:
    """Triples indexing the first structure map of a complex of dimension ``top_dim``."""
    for q in range(top_dim):
        for i in range(top_dim + 1):
            for j in range(top_dim + 1):
                yield ConnectionSpec(q, i, j)
    yield ConnectionSpec(top_dim, 0, 0)


def first_structure_map_size(top_dim: int) -> int:
    d = top_dim
    return d**3 + 2 * d**2 + d + 1


def first_structure_map(c: DirectedFlagComplex) -> Iterator[ConnectivityDigraph]:
    """Lazily build the connectivity digraph of every structure triple."""
    for spec in structure_triples(c.dim):
        yield build_connectivity_digraph(c, spec)


__all__ = [
    "Condensation",
    "ConnectionSpec",
    "ConnectivityDigraph",
    "DirectedPseudomanifoldCertificate",
    "build_connectivity_digraph",
    "condense",
    "directed_pseudomanifold_check",
    "directed_q_near",
    "first_structure_map",
    "first_structure_map_size",
    "structure_triples",
    "summary",
    "summary_json",
    "top_flow_digraph",
    "top_flow_dimension",
]
