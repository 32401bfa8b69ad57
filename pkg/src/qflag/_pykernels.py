"""Pure-Python kernels; reference implementation and fallback for ``_ckernels``.

Every function here has an identically named, identically behaving
counterpart in the compiled module.
"""

import numpy as np

from qflag.errors import CeilingExceeded

NAME = "python"


def enumerate_flag(indptr, indices, num_vertices, max_dim, ceiling):
    """All directed cliques, as one lexicographically sorted array per dimension.

    A clique ``(v0, ..., vk)`` is extended at the sink end by any ``w`` in the
    common out-neighbourhood of ``v0..vk``; vertices are tried in ascending
    order, which yields lexicographic order within each dimension.
    """
    n = int(num_vertices)
    if max_dim is None or max_dim < 0:
        max_dim = max(n - 1, 0)
    indptr = np.asarray(indptr).tolist()
    indices = np.asarray(indices).tolist()
    out_lists = [indices[indptr[v]:indptr[v + 1]] for v in range(n)]
    out_sets = [set(lst) for lst in out_lists]
    levels = [[] for _ in range(max_dim + 1)]
    counts = [0] * (max_dim + 1)

    def bump(d):
        counts[d] += 1
        if counts[d] > ceiling:
            raise CeilingExceeded(
                f"more than {ceiling} simplices in dimension {d}",
                [c for c in counts if c] or [0],
            )

    def extend(prefix, cands):
        d = len(prefix)
        for w in cands:
            clique = prefix + (w,)
            levels[d].extend(clique)
            bump(d)
            if d < max_dim:
                ws = out_sets[w]
                nxt = [u for u in cands if u in ws]
                if nxt:
                    extend(clique, nxt)

    for v in range(n):
        levels[0].append(v)
        bump(0)
        if max_dim > 0 and out_lists[v]:
            extend((v,), out_lists[v])

    result = []
    for d, flat in enumerate(levels):
        if d > 0 and not flat:
            break
        result.append(np.array(flat, dtype=np.int32).reshape(-1, d + 1))
    return result


def lookup_subfaces(rows, positions, table):
    """Row ids in ``table`` of every sub-tuple ``rows[r, positions[p]]``.

    Returns an ``(len(rows), len(positions))`` int64 array, -1 where absent.
    """
    rows = np.asarray(rows)
    positions = np.asarray(positions)
    index = {tuple(t): k for k, t in enumerate(np.asarray(table).tolist())}
    pos = [tuple(p) for p in positions.tolist()]
    out = np.empty((len(rows), len(pos)), dtype=np.int64)
    for r, row in enumerate(rows.tolist()):
        for p, cols in enumerate(pos):
            out[r, p] = index.get(tuple(row[c] for c in cols), -1)
    return out


def gf2_rank(matrix):
    """Rank over the two-element field of a 0/1 matrix."""
    mat = np.asarray(matrix, dtype=np.uint8)
    if mat.size == 0:
        return 0
    pivots = {}
    rank = 0
    for row in mat:
        bits = int.from_bytes(np.packbits(row & 1).tobytes(), "big")
        while bits:
            top = bits.bit_length() - 1
            if top in pivots:
                bits ^= pivots[top]
            else:
                pivots[top] = bits
                rank += 1
                break
    return rank
