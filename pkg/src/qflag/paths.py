"""Longest simplicial paths through condensed connectivity digraphs.

A longest path in the condensation DAG is lifted back to simplices: a
singleton component contributes its simplex, a larger component
contributes the longest of the shortest internal paths between the
simplices that keep consecutive steps near. All ties are broken by
smallest node id, so results are reproducible.
"""

from __future__ import annotations

import csv
import heapq
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np
from scipy.sparse.csgraph import shortest_path

from qflag.errors import AugmentationInfeasible, InvariantViolation
from qflag.flagcomplex import DirectedFlagComplex, is_face
from qflag.qdirected import (
    Condensation,
    ConnectionSpec,
    ConnectivityDigraph,
    _spec,
    build_connectivity_digraph,
    condense,
    directed_q_near,
)

DEFAULT_RETRIES = 32
# rows of the source-by-member distance matrix computed per batch
_BFS_BATCH = 256


def path_fraction(simplices, q: int) -> Fraction:
    """Distinct vertices over the vertex budget of an ideally glued path.

    The first simplex is budgeted all of its vertices; each later simplex
    adds its dimension difference when its predecessor is a face of it, and
    ``dim - q`` otherwise.
    """
    if not simplices:
        raise ValueError("empty path")
    seen = set(simplices[0])
    total = len(simplices[0])
    for prev, cur in zip(simplices, simplices[1:]):
        seen.update(cur)
        total += (len(cur) - len(prev)) if is_face(prev, cur) else (len(cur) - 1 - q)
    if total <= 0:
        raise ValueError("path has a non-positive vertex budget")
    return Fraction(len(seen), total)


@dataclass
class SimplicialPath:
    """A chain of consecutively near simplices.

    Attributes
    ----------
    spec : ConnectionSpec
    simplices : list of tuple
    condensation_path : list of int
        Component ids the path was lifted from.
    component_sizes : list of int
        Member counts of those components.
    """

    spec: ConnectionSpec
    simplices: list
    condensation_path: list = field(default_factory=list)
    component_sizes: list = field(default_factory=list)

    @property
    def length(self) -> int:
        return len(self.simplices)

    @property
    def fraction(self) -> Fraction:
        return path_fraction(self.simplices, self.spec.q)

    def to_dict(self) -> dict:
        q, i, j = self.spec
        f = self.fraction
        return {
            "spec": {"q": q, "i": i, "j": j},
            "length": self.length,
            "fraction": float(f),
            "fraction_exact": f"{f.numerator}/{f.denominator}",
            "simplices": [list(s) for s in self.simplices],
            "condensation_path_node_sizes": list(self.component_sizes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _heights(c: Condensation) -> list[int]:
    """Node count of the longest path starting at each component."""
    best = [1] * c.num_nodes
    for x in reversed(c.topological_order):
        succ = c.successors(x)
        if len(succ):
            best[x] = 1 + max(best[y] for y in succ.tolist())
    return best


def longest_condensation_path(c: Condensation) -> list[int]:
    """Longest path by node count; among ties the lexicographically smallest."""
    if c.num_nodes == 0:
        return []
    best = _heights(c)
    top = max(best)
    x = best.index(top)
    path = [x]
    while best[x] > 1:
        x = min(y for y in c.successors(x).tolist() if best[y] == best[x] - 1)
        path.append(x)
    return path


def iter_condensation_paths(c: Condensation) -> Iterator[list[int]]:
    """Source-to-sink paths in order of decreasing length, then lex order.

    Best-first search keyed on the exact remaining height, so the first
    path equals :func:`longest_condensation_path`.
    """
    if c.num_nodes == 0:
        return
    best = _heights(c)
    indeg = np.bincount(c.dst, minlength=c.num_nodes)
    heap = [(-best[x], (x,)) for x in range(c.num_nodes) if indeg[x] == 0]
    heapq.heapify(heap)
    while heap:
        neg, prefix = heapq.heappop(heap)
        succ = c.successors(prefix[-1]).tolist()
        if not succ:
            yield list(prefix)
            continue
        base = len(prefix)
        for y in succ:
            heapq.heappush(heap, (-(base + best[y]), prefix + (y,)))


def _induced(g: ConnectivityDigraph, members: np.ndarray):
    a = g.adjacency()
    return a[members][:, members].tocsr()


def _lex_shortest(sub, start: int, dist_from: np.ndarray, dist_to: np.ndarray, length: int) -> list[int]:
    """Smallest-index walk along shortest paths; indices are local."""
    path = [start]
    cur = start
    for step in range(1, length + 1):
        nxt = sub.indices[sub.indptr[cur]:sub.indptr[cur + 1]]
        ok = nxt[(dist_from[nxt] == step) & (dist_to[nxt] == length - step)]
        cur = int(ok.min())
        path.append(cur)
    return path


def longest_shortest_path(sub, sources, targets) -> list[int]:
    """Longest among shortest paths from ``sources`` to ``targets`` in ``sub``.

    Indices are local to ``sub``. Ties go to the smallest source, then the
    lexicographically smallest walk.

    Raises
    ------
    AugmentationInfeasible
        When no source reaches a target.
    """
    sources = np.unique(np.asarray(sources, dtype=np.int64))
    targets = np.unique(np.asarray(targets, dtype=np.int64))
    if not len(sources) or not len(targets):
        raise AugmentationInfeasible("empty source or target set inside a component")
    best_len, best_src = -1, -1
    for lo in range(0, len(sources), _BFS_BATCH):
        chunk = sources[lo:lo + _BFS_BATCH]
        d = shortest_path(sub, method="D", unweighted=True, indices=chunk)
        d = np.atleast_2d(d)[:, targets]
        d[~np.isfinite(d)] = -1
        row_best = d.max(axis=1)
        k = int(np.argmax(row_best))
        if row_best[k] > best_len:
            best_len, best_src = int(row_best[k]), int(chunk[k])
    if best_len < 0:
        raise AugmentationInfeasible("no source reaches a target inside a component")
    dist_from = np.atleast_1d(shortest_path(sub, method="D", unweighted=True, indices=best_src))
    ends = targets[dist_from[targets] == best_len]
    # distance to the nearest chosen end, on the reversed graph
    back = shortest_path(sub.T.tocsr(), method="D", unweighted=True, indices=ends)
    dist_to = np.atleast_2d(back).min(axis=0)
    return _lex_shortest(sub, best_src, dist_from, dist_to, best_len)


def augment_path(c: Condensation, g: ConnectivityDigraph, p: list[int]) -> SimplicialPath:
    """Lift a condensation path to a path of simplices.

    For a component with several members, sources are the successors of the
    previously placed simplex inside it (all members at the start) and
    targets are members with a successor in the next component (all members
    at the end).
    """
    out: list[int] = []
    current = None
    for k, x in enumerate(p):
        members = c.members[x]
        if len(members) == 1:
            out.append(int(members[0]))
            current = int(members[0])
            continue
        local = {int(n): t for t, n in enumerate(members.tolist())}
        if current is None:
            sources = np.arange(len(members))
        else:
            sources = [local[int(n)] for n in g.successors(current).tolist() if int(n) in local]
        if k < len(p) - 1:
            nxt = set(c.members[p[k + 1]].tolist())
            targets = [t for t, n in enumerate(members.tolist()) if nxt.intersection(g.successors(n).tolist())]
        else:
            targets = np.arange(len(members))
        walk = longest_shortest_path(_induced(g, members), sources, targets)
        out.extend(int(members[t]) for t in walk)
        current = out[-1]
    return SimplicialPath(
        g.spec,
        [g.node_simplex(n) for n in out],
        condensation_path=list(p),
        component_sizes=[c.size(x) for x in p],
    )


def verify_path(path: SimplicialPath, complex_: DirectedFlagComplex | None = None) -> None:
    """Re-check every step with :func:`directed_q_near`; raise on failure."""
    for a, b in zip(path.simplices, path.simplices[1:]):
        if a == b or not directed_q_near(a, b, path.spec, complex_):
            raise InvariantViolation(f"step {a} -> {b} is not {path.spec}-near")


def longest_simplicial_path(
    complex_: DirectedFlagComplex, spec, retries: int = DEFAULT_RETRIES, graph: ConnectivityDigraph | None = None
) -> SimplicialPath:
    """Build, condense, pick the longest condensation path and lift it.

    If lifting fails, the next-best condensation paths are tried, up to
    ``retries`` candidates in total.
    """
    spec = _spec(spec)
    g = build_connectivity_digraph(complex_, spec) if graph is None else graph
    c = condense(g)
    last = None
    for n, p in enumerate(iter_condensation_paths(c)):
        if n >= retries:
            break
        try:
            path = augment_path(c, g, p)
        except AugmentationInfeasible as exc:
            last = exc
            continue
        verify_path(path)
        return path
    raise AugmentationInfeasible(f"no liftable condensation path among {retries} candidates") from last


def path_grid(complex_: DirectedFlagComplex, q: int, i_values, j_values, skip_diagonal: bool = True,
              retries: int = DEFAULT_RETRIES) -> dict:
    """Longest paths over an (i, j) grid at fixed ``q``.

    Returns a dict keyed by ``(i, j)``; skipped cells are absent and
    infeasible cells map to None.
    """
    out = {}
    for i in i_values:
        for j in j_values:
            if skip_diagonal and i == j:
                continue
            try:
                out[(i, j)] = longest_simplicial_path(complex_, ConnectionSpec(q, i, j), retries=retries)
            except AugmentationInfeasible:
                out[(i, j)] = None
    return out


def grid_csv(grid: dict, i_values, j_values, value: str = "length") -> str:
    """CSV matrix with rows ``i`` and columns ``j``.

    Empty cells were skipped; ``infeasible`` marks cells with no liftable path.
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["i\\j"] + list(j_values))
    for i in i_values:
        row = [i]
        for j in j_values:
            if (i, j) not in grid:
                row.append("")
            elif grid[(i, j)] is None:
                row.append("infeasible")
            elif value == "length":
                row.append(grid[(i, j)].length)
            else:
                row.append(f"{float(grid[(i, j)].fraction):.6f}")
        w.writerow(row)
    return buf.getvalue()


__all__ = [
    "DEFAULT_RETRIES",
    "SimplicialPath",
    "augment_path",
    "grid_csv",
    "iter_condensation_paths",
    "longest_condensation_path",
    "longest_shortest_path",
    "longest_simplicial_path",
    "path_fraction",
    "path_grid",
    "verify_path",
]
