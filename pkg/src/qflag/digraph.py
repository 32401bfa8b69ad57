"""Directed graph model and loaders for edge lists and adjacency matrices."""

from __future__ import annotations

import io
import re
from typing import Iterable, TextIO

import numpy as np

from qflag.errors import DigraphFormatError

_SPLIT = re.compile(r"[,\s]+")


class Digraph:
    """Simple loop-free directed graph on vertices ``0..num_vertices-1``.

    Reciprocal pairs ``(v, w)`` and ``(w, v)`` may both be present. The
    instance is treated as immutable once constructed; out-neighbourhoods
    are kept as a CSR pair of sorted arrays so kernels can consume them
    directly.

    Parameters
    ----------
    num_vertices : int
        Number of vertices.
    edges : iterable of (int, int)
        Directed edges. Duplicates collapse to one edge.
    labels : sequence, optional
        External vertex names when ids were remapped on load.
    """

    def __init__(self, num_vertices: int, edges: Iterable[tuple[int, int]] = (), labels=None):
        n = int(num_vertices)
        if n < 0:
            raise ValueError("num_vertices must be non-negative")
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        arr = arr.reshape(-1, 2)
        if arr.size:
            if arr.min() < 0 or arr.max() >= n:
                raise ValueError("edge endpoint out of range")
            loops = np.nonzero(arr[:, 0] == arr[:, 1])[0]
            if loops.size:
                v = int(arr[loops[0], 0])
                raise ValueError(f"self-loop at vertex {v}")
            arr = np.unique(arr, axis=0)
        self.num_vertices = n
        self._edges = arr
        counts = np.bincount(arr[:, 0], minlength=n) if arr.size else np.zeros(n, dtype=np.int64)
        self.indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=self.indptr[1:])
        # np.unique sorts rows lexicographically, so targets are already sorted per source
        self.indices = np.ascontiguousarray(arr[:, 1], dtype=np.int32)
        self.labels = list(labels) if labels is not None else None

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    @property
    def edge_array(self) -> np.ndarray:
        """Edges as a sorted ``(m, 2)`` int array."""
        return self._edges

    @property
    def edges(self) -> set[tuple[int, int]]:
        return {(int(a), int(b)) for a, b in self._edges}

    def out_neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def has_edge(self, v: int, w: int) -> bool:
        nbrs = self.out_neighbors(v)
        k = np.searchsorted(nbrs, w)
        return bool(k < len(nbrs) and nbrs[k] == w)

    def reciprocal_pairs(self) -> int:
        """Number of unordered vertex pairs joined in both directions."""
        return sum(1 for a, b in self._edges if a < b and self.has_edge(int(b), int(a)))

    def adjacency_matrix(self) -> np.ndarray:
        mat = np.zeros((self.num_vertices, self.num_vertices), dtype=np.uint8)
        if self.num_edges:
            mat[self._edges[:, 0], self._edges[:, 1]] = 1
        return mat

    @classmethod
    def from_adjacency(cls, matrix) -> "Digraph":
        """Build from a dense or scipy sparse square 0/1 matrix."""
        if hasattr(matrix, "tocoo"):
            coo = matrix.tocoo()
            if coo.shape[0] != coo.shape[1]:
                raise ValueError("adjacency matrix must be square")
            mask = coo.data != 0
            return cls(coo.shape[0], np.column_stack([coo.row[mask], coo.col[mask]]))
        mat = np.asarray(matrix)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("adjacency matrix must be square")
        rows, cols = np.nonzero(mat)
        return cls(mat.shape[0], np.column_stack([rows, cols]))

    def to_edge_list(self) -> str:
        """Edge-list text; round-trips through :func:`load_edge_list`.

        A ``# vertices N`` header preserves isolated trailing vertices.
        """
        lines = [f"# vertices {self.num_vertices}"]
        lines.extend(f"{a} {b}" for a, b in self._edges)
        return "\n".join(lines) + "\n"

    def __eq__(self, other):
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.num_vertices == other.num_vertices and np.array_equal(self._edges, other._edges)

    def __hash__(self):
        return hash((self.num_vertices, self._edges.tobytes()))

    def __repr__(self):
        return f"Digraph(num_vertices={self.num_vertices}, num_edges={self.num_edges})"


def _as_stream(source) -> TextIO:
    if isinstance(source, str):
        return io.StringIO(source)
    return source


_VERTICES_HEADER = re.compile(r"#\s*vertices\s+(\d+)\s*$")


def load_edge_list(source, num_vertices: int | None = None, remap: bool = False) -> Digraph:
    """Parse ``src dst`` lines into a :class:`Digraph`.

    Blank lines and ``#`` comments are ignored; a ``# vertices N`` comment
    sets the vertex count unless ``num_vertices`` is given. Without a count
    the graph has ``1 + max id`` vertices.

    With ``remap=True`` the ids may be sparse; they are relabelled densely in
    ascending numeric order and the original ids are kept in ``labels``.

    Raises
    ------
    DigraphFormatError
        On a malformed token, a self-loop, or an id beyond ``num_vertices``.
    """
    stream = _as_stream(source)
    pairs = []
    header_n = None
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _VERTICES_HEADER.match(line)
            if m:
                header_n = int(m.group(1))
            continue
        line = line.split("#", 1)[0]
        tokens = line.split()
        if len(tokens) != 2:
            raise DigraphFormatError(f"expected two vertex ids, got {len(tokens)} tokens", lineno)
        try:
            a, b = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise DigraphFormatError(f"malformed vertex id in {line!r}", lineno) from None
        if a < 0 or b < 0:
            raise DigraphFormatError("vertex ids must be non-negative", lineno)
        if a == b:
            raise DigraphFormatError(f"self-loop at vertex {a}", lineno)
        pairs.append((a, b, lineno))

    labels = None
    if remap:
        labels = sorted({a for a, _, _ in pairs} | {b for _, b, _ in pairs})
        lookup = {v: k for k, v in enumerate(labels)}
        pairs = [(lookup[a], lookup[b], ln) for a, b, ln in pairs]
        n = len(labels)
        if num_vertices is not None and num_vertices < n:
            raise DigraphFormatError(f"{n} distinct ids exceed num_vertices={num_vertices}")
        if num_vertices is not None:
            n = num_vertices
    else:
        n = num_vertices if num_vertices is not None else header_n
        top = max((max(a, b) for a, b, _ in pairs), default=-1)
        if n is None:
            n = top + 1
        elif top >= n:
            bad = next(ln for a, b, ln in pairs if max(a, b) >= n)
            raise DigraphFormatError(f"vertex id {top} out of range for {n} vertices", bad)
    return Digraph(n, [(a, b) for a, b, _ in pairs], labels=labels)


def load_adjacency_matrix(source) -> Digraph:
    """Parse a dense 0/1 square matrix, rows separated by newlines.

    Entries may be separated by commas and/or whitespace; ``#`` lines are
    skipped.
    """
    stream = _as_stream(source)
    rows = []
    linenos = []
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = [t for t in _SPLIT.split(line) if t]
        row = []
        for t in tokens:
            try:
                val = float(t)
            except ValueError:
                raise DigraphFormatError(f"non-numeric entry {t!r}", lineno) from None
            if val not in (0.0, 1.0):
                raise DigraphFormatError(f"non-binary entry {t!r}", lineno)
            row.append(int(val))
        rows.append(row)
        linenos.append(lineno)
    n = len(rows)
    for row, lineno in zip(rows, linenos):
        if len(row) != n:
            raise DigraphFormatError(f"matrix is not square: row has {len(row)} entries, expected {n}", lineno)
    for k, (row, lineno) in enumerate(zip(rows, linenos)):
        if row[k]:
            raise DigraphFormatError(f"nonzero diagonal entry at ({k},{k})", lineno)
    mat = np.array(rows, dtype=np.uint8).reshape(n, n)
    return Digraph.from_adjacency(mat)


def load_digraph(path, fmt: str = "auto", remap: bool = False) -> Digraph:
    """Load from a file path, guessing the format from content when ``fmt='auto'``."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if fmt == "auto":
        fmt = sniff_format(text)
        if fmt == "adjacency":
            try:
                return load_adjacency_matrix(text)
            except DigraphFormatError:
                return load_edge_list(text, remap=remap)
    if fmt == "edgelist":
        return load_edge_list(text, remap=remap)
    if fmt == "adjacency":
        return load_adjacency_matrix(text)
    raise ValueError(f"unknown input format {fmt!r}")


def sniff_format(text: str) -> str:
    """Guess ``edgelist`` or ``adjacency`` from the first data lines."""
    data = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not data:
        return "edgelist"
    rows = [[t for t in _SPLIT.split(ln.strip()) if t] for ln in data]
    widths = {len(r) for r in rows}
    binary = all(t in ("0", "1") for r in rows for t in r)
    if "," in data[0] or (widths == {len(data)} and binary):
        return "adjacency"
    return "edgelist"
