"""Classical Q-analysis of (unordered) simplicial complexes.

Two simplices are q-near when they share at least ``q + 1`` vertices; the
transitive closure of q-nearness partitions ``K_q``, the simplices of
dimension at least ``q``. Nodes of ``K_q`` are always numbered by
(dimension, lexicographic order), which fixes every tie-break below.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from qflag import _kernels
from qflag.digraph import Digraph
from qflag.flagcomplex import DirectedFlagComplex, build_complex, subsequence_positions
from qflag.simplicial import SimplicialComplexView
from qflag.topology import Poset

INCIDENCE_THRESHOLD = 20_000
INFINITE = math.inf


def q_near(a, b, q: int) -> bool:
    """True iff ``a`` and ``b`` share at least ``q + 1`` vertices."""
    return len(set(a) & set(b)) >= q + 1


def _as_view(k) -> SimplicialComplexView:
    if isinstance(k, DirectedFlagComplex):
        return SimplicialComplexView.from_directed(k)
    return k


def _offsets(k: SimplicialComplexView, q: int) -> np.ndarray:
    counts = [len(k.array(d)) for d in range(q, k.dim + 1)]
    return np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)


def _face_membership(k: SimplicialComplexView, q: int):
    """Sparse incidence of ``K_q`` nodes against the q-simplices they contain."""
    off = _offsets(k, q)
    table = k.array(q)
    rows, cols = [], []
    for d in range(q, k.dim + 1):
        arr = k.array(d)
        if not len(arr):
            continue
        ids = _kernels.lookup_subfaces(arr, subsequence_positions(d + 1, q + 1), table)
        rows.append(np.repeat(np.arange(len(arr), dtype=np.int64) + off[d - q], ids.shape[1]))
        cols.append(ids.ravel())
    n = int(off[-1])
    if not rows:
        return sp.csr_matrix((n, len(table)), dtype=np.int32)
    r, c = np.concatenate(rows), np.concatenate(cols)
    return sp.csr_matrix((np.ones(len(r), dtype=np.int32), (r, c)), shape=(n, len(table)))


def _vertex_incidence(k: SimplicialComplexView, q: int):
    off = _offsets(k, q)
    rows, cols = [], []
    for d in range(q, k.dim + 1):
        arr = k.array(d)
        rows.append(np.repeat(np.arange(len(arr), dtype=np.int64) + off[d - q], d + 1))
        cols.append(arr.ravel().astype(np.int64))
    n = int(off[-1])
    nv = int(k.array(0).max()) + 1 if len(k.array(0)) else 0
    if not rows:
        return sp.csr_matrix((n, nv), dtype=np.int32)
    r, c = np.concatenate(rows), np.concatenate(cols)
    return sp.csr_matrix((np.ones(len(r), dtype=np.int32), (r, c)), shape=(n, nv))


@dataclass
class QGraph:
    """Undirected q-nearness graph on ``K_q``.

    ``edges`` is an ``(m, 2)`` array of node ids with ``a < b``, sorted.
    """

    q: int
    nodes: list
    edges: np.ndarray = field(repr=False)

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def node_index(self, s) -> int:
        if not hasattr(self, "_index"):
            self._index = {t: n for n, t in enumerate(self.nodes)}
        return self._index[tuple(sorted(s))]

    def adjacency(self):
        n = self.num_nodes
        data = np.ones(2 * len(self.edges), dtype=np.int8)
        r = np.concatenate([self.edges[:, 0], self.edges[:, 1]])
        c = np.concatenate([self.edges[:, 1], self.edges[:, 0]])
        return sp.csr_matrix((data, (r, c)), shape=(n, n))

    def degrees(self) -> np.ndarray:
        return np.bincount(self.edges.ravel(), minlength=self.num_nodes)

    def edge_set(self) -> set:
        return {(self.nodes[a], self.nodes[b]) for a, b in self.edges.tolist()}

    def component_labels(self) -> np.ndarray:
        """Component id per node; ids ordered by smallest member."""
        _, lab = connected_components(self.adjacency(), directed=False)
        return _relabel_by_first(lab)

    def to_dot(self) -> str:
        out = [f"graph q{self.q} {{"]
        for n, s in enumerate(self.nodes):
            out.append(f'  n{n} [label="{_fmt(s)}"];')
        for a, b in self.edges.tolist():
            out.append(f"  n{a} -- n{b};")
        out.append("}")
        return "\n".join(out) + "\n"


def _fmt(s) -> str:
    return "(" + ",".join(map(str, s)) + ")"


def _relabel_by_first(lab: np.ndarray) -> np.ndarray:
    if not len(lab):
        return lab.astype(np.int64)
    _, first = np.unique(lab, return_index=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(len(first))
    return rank[lab]


def _edges_from_product(prod, threshold: int) -> np.ndarray:
    coo = sp.triu(prod, k=1).tocoo()
    keep = coo.data >= threshold
    e = np.column_stack([coo.row[keep], coo.col[keep]]).astype(np.int64)
    if len(e):
        e = e[np.lexsort((e[:, 1], e[:, 0]))]
    return e.reshape(-1, 2)


def build_q_graph(k, q: int, method: str = "auto") -> QGraph:
    """Build the q-graph of ``k``.

    Parameters
    ----------
    k : SimplicialComplexView or DirectedFlagComplex
    q : int
    method : {"auto", "incidence", "faces"}
        ``incidence`` thresholds the vertex incidence product (shared vertex
        counts minus one at least ``q``); ``faces`` joins simplices through an
        index of their q-faces. ``auto`` uses the product below
        ``INCIDENCE_THRESHOLD`` nodes.
    """
    k = _as_view(k)
    if q < 0:
        raise ValueError("q must be non-negative")
    nodes = k.all_simplices(q)
    if method == "auto":
        method = "incidence" if len(nodes) <= INCIDENCE_THRESHOLD else "faces"
    if method == "incidence":
        lam = _vertex_incidence(k, q)
        edges = _edges_from_product(lam @ lam.T, q + 1)
    elif method == "faces":
        b = _face_membership(k, q)
        edges = _edges_from_product(b @ b.T, 1)
    else:
        raise ValueError(f"unknown method {method!r}")
    return QGraph(q, nodes, edges)


def q_components(g: QGraph) -> list[list[tuple]]:
    """q-connected classes of ``K_q``, each sorted, ordered by smallest member."""
    lab = g.component_labels()
    out: list[list] = [[] for _ in range(int(lab.max()) + 1 if len(lab) else 0)]
    for n, c in enumerate(lab.tolist()):
        out[c].append(g.nodes[n])
    return out


def q_component_labels(k, q: int) -> np.ndarray:
    """Component ids over ``K_q`` without materialising the q-graph."""
    k = _as_view(k)
    b = _face_membership(k, q)
    n, f = b.shape
    # bipartite graph: nodes of K_q then q-faces
    big = sp.bmat([[None, b], [b.T, None]], format="csr") if n and f else sp.csr_matrix((n + f, n + f))
    _, lab = connected_components(big, directed=False)
    return _relabel_by_first(lab[:n])


@dataclass(frozen=True)
class StructureVectors:
    """Structure vectors, all indexed from the top dimension down to 0."""

    Q: tuple
    N: tuple
    T: tuple
    Qhat: tuple

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        top = len(self.Q) - 1
        w.writerow(["vector"] + [f"q{q}" for q in range(top, -1, -1)])
        for name in ("Q", "N", "T", "Qhat"):
            w.writerow([name] + [_num(x) for x in getattr(self, name)])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {"Q": list(self.Q), "N": list(self.N), "T": list(self.T), "Qhat": list(self.Qhat)}


def _num(x):
    return repr(round(x, 12)) if isinstance(x, float) else str(x)


def structure_vectors(k) -> StructureVectors:
    k = _as_view(k)
    if k.dim < 0:
        raise ValueError("structure vectors need a non-empty complex")
    qs, ns = [], []
    for q in range(k.dim, -1, -1):
        lab = q_component_labels(k, q)
        qs.append(int(lab.max()) + 1)
        ns.append(len(lab))
    t = tuple(1 - a / b for a, b in zip(qs, ns))
    return StructureVectors(tuple(qs), tuple(ns), t, tuple(a - 1 for a in qs))


def eccentricities(k, simplices=None) -> dict:
    """Eccentricity of each given simplex (default: the maximal ones).

    Values are Fractions, or ``INFINITE`` when the simplex reaches no
    non-face at any q.
    """
    k = _as_view(k)
    targets = k.maximal_simplices() if simplices is None else [tuple(sorted(s)) for s in simplices]
    for s in targets:
        if s not in k:
            raise KeyError(f"{s} is not a simplex of the complex")
    result: dict = {}
    pending = {s: len(s) - 1 for s in targets}
    for q in range(max(pending.values(), default=-1), -1, -1):
        live = [s for s, d in pending.items() if d >= q and s not in result]
        if not live:
            continue
        lab = q_component_labels(k, q)
        nodes = k.all_simplices(q)
        members: dict[int, list] = {}
        for n, c in enumerate(lab.tolist()):
            members.setdefault(c, []).append(nodes[n])
        off = _offsets(k, q)
        for s in live:
            c = int(lab[off[len(s) - 1 - q] + k.index_of(s)])
            ss = set(s)
            if any(not set(t) <= ss for t in members[c]):
                result[s] = Fraction(len(s) - 1 - q, q + 1)
    for s in targets:
        result.setdefault(s, INFINITE)
    return result


def eccentricity(k, s):
    return eccentricities(k, [s])[tuple(sorted(s))]


def incidence_complexes(lam) -> tuple[SimplicialComplexView, SimplicialComplexView]:
    """Complexes of a relation: row supports over columns, column supports over rows."""
    m = np.asarray(lam)
    if m.ndim != 2 or m.size == 0:
        raise ValueError("need a non-empty 2-d binary matrix")
    if not np.isin(m, (0, 1)).all():
        raise ValueError("relation matrix must be binary")
    rows = [np.flatnonzero(r).tolist() for r in m]
    cols = [np.flatnonzero(c).tolist() for c in m.T]
    return SimplicialComplexView.from_simplices(rows), SimplicialComplexView.from_simplices(cols)


def shared_face_matrix(lam) -> np.ndarray:
    """Dimensions of pairwise shared faces between row simplices (-1 for none)."""
    m = np.asarray(lam, dtype=np.int64)
    return m @ m.T - 1


def clique_communities(edges, k: int, num_vertices: int | None = None) -> list[list[tuple]]:
    """Clique-percolation communities of an undirected graph.

    Parameters
    ----------
    edges : iterable of (int, int)
        Undirected edges; orientation and duplicates are ignored.
    k : int
        Clique size, at least 2.

    Returns
    -------
    list of list of tuple
        Each community lists its k-cliques (sorted vertex tuples); two
        cliques are in one community when chained by overlaps of ``k - 1``
        vertices.
    """
    if k < 2:
        raise ValueError("clique size must be at least 2")
    e = np.array([(min(a, b), max(a, b)) for a, b in edges if a != b], dtype=np.int64).reshape(-1, 2)
    n = num_vertices if num_vertices is not None else (int(e.max()) + 1 if len(e) else 0)
    # orienting low -> high makes every clique a single ordered simplex
    cx = build_complex(Digraph(n, e), max_dim=k - 1)
    view = SimplicialComplexView([cx.simplices(d) for d in range(cx.dim + 1)])
    if view.dim < k - 1:
        return []
    cliques = view.simplices(k - 1)
    ids = _kernels.lookup_subfaces(view.array(k - 1), subsequence_positions(k, k - 1), view.array(k - 2))
    r = np.repeat(np.arange(len(cliques)), ids.shape[1])
    b = sp.csr_matrix((np.ones(len(r), dtype=np.int32), (r, ids.ravel())), shape=(len(cliques), len(view.array(k - 2))))
    _, lab = connected_components(b @ b.T, directed=False)
    lab = _relabel_by_first(lab)
    out: list[list] = [[] for _ in range(int(lab.max()) + 1)]
    for c, s in zip(lab.tolist(), cliques):
        out[c].append(s)
    return out


@dataclass
class PseudomanifoldCertificate:
    """Outcome of a pseudomanifold test.

    ``is_pseudomanifold`` uses the at-most-two rule; ``closed`` additionally
    requires every (n-1)-simplex to lie in exactly two n-simplices, and
    ``with_boundary`` flags a pseudomanifold whose boundary is non-empty.
    """

    n: int
    is_pseudomanifold: bool
    closed: bool
    with_boundary: bool
    boundary: list
    violations: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "is_pseudomanifold": self.is_pseudomanifold,
            "closed": self.closed,
            "with_boundary": self.with_boundary,
            "boundary": [list(s) for s in self.boundary],
            "violations": list(self.violations),
        }


def _certify(n, maximal, faces, coface_counts, connected, extra=()):
    violations = []
    for s in maximal:
        if len(s) - 1 != n:
            violations.append(f"maximal simplex {_fmt(s)} has dimension {len(s) - 1}, expected {n}")
    if not any(len(s) - 1 == n for s in maximal):
        violations.append(f"no {n}-simplices")
    for s, c in zip(faces, coface_counts):
        if c > 2:
            violations.append(f"{n - 1}-simplex {_fmt(s)} is a face of {c} {n}-simplices")
    if not connected:
        violations.append(f"{n}-simplices are not {n - 1}-connected")
    violations.extend(extra)
    boundary = [s for s, c in zip(faces, coface_counts) if c == 1]
    ok = not violations
    closed = ok and all(c == 2 for c in coface_counts)
    return PseudomanifoldCertificate(n, ok, closed, ok and bool(boundary), boundary, violations)


def pseudomanifold_check(k, n: int) -> PseudomanifoldCertificate:
    """Test whether ``k`` is an n-pseudomanifold (possibly with boundary)."""
    if n < 1:
        raise ValueError("pseudomanifolds are defined for n >= 1")
    k = _as_view(k)
    maximal = k.maximal_simplices()
    faces = k.simplices(n - 1)
    top = k.array(n)
    counts = np.zeros(len(faces), dtype=np.int64)
    connected = True
    if len(top):
        ids = _kernels.lookup_subfaces(top, subsequence_positions(n + 1, n), k.array(n - 1))
        counts = np.bincount(ids.ravel(), minlength=len(faces))
        r = np.repeat(np.arange(len(top)), n + 1)
        b = sp.csr_matrix((np.ones(len(r), dtype=np.int32), (r, ids.ravel())), shape=(len(top), len(faces)))
        ncomp, _ = connected_components(b @ b.T, directed=False)
        connected = ncomp == 1
    return _certify(n, maximal, faces, counts.tolist(), connected)


def face_poset(k) -> Poset:
    """Face poset with codimension-one Hasse edges.

    Elements are numbered by (dimension, lex); ``labels`` holds the simplices.
    Accepts an unordered view or a directed flag complex (ordered faces).
    """
    if isinstance(k, DirectedFlagComplex):
        levels = [k.simplices(d) for d in range(k.dim + 1)]
    else:
        levels = [k.array(d) for d in range(k.dim + 1)]
    sizes = [len(a) for a in levels]
    off = np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)
    edges = []
    for d in range(1, len(levels)):
        pos = np.array([[c for c in range(d + 1) if c != i] for i in range(d + 1)], dtype=np.int32)
        ids = _kernels.lookup_subfaces(levels[d], pos, levels[d - 1])
        src = ids.ravel() + off[d - 1]
        dst = np.repeat(np.arange(sizes[d], dtype=np.int64) + off[d], d + 1)
        edges.append(np.column_stack([src, dst]))
    arr = np.concatenate(edges) if edges else np.empty((0, 2), dtype=np.int64)
    labels = [tuple(r) for a in levels for r in a.tolist()]
    return Poset(int(off[-1]), arr, labels=labels)


__all__ = [
    "INFINITE",
    "PseudomanifoldCertificate",
    "QGraph",
    "StructureVectors",
    "build_q_graph",
    "clique_communities",
    "eccentricities",
    "eccentricity",
    "face_poset",
    "incidence_complexes",
    "pseudomanifold_check",
    "q_component_labels",
    "q_components",
    "q_near",
    "shared_face_matrix",
    "structure_vectors",
]
