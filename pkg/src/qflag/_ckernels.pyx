# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Behaviour must match ``qflag._pykernels`` exactly."""

from libc.stdint cimport int32_t, int64_t, uint64_t
from libcpp.vector cimport vector

import numpy as np

from qflag.errors import CeilingExceeded

NAME = "cython"


cdef inline void _intersect(const int32_t* a, Py_ssize_t na,
                            const int32_t* b, Py_ssize_t nb,
                            vector[int32_t]& out) nogil:
    cdef Py_ssize_t i = 0, j = 0
    out.clear()
    while i < na and j < nb:
        if a[i] < b[j]:
            i += 1
        elif a[i] > b[j]:
            j += 1
        else:
            out.push_back(a[i])
            i += 1
            j += 1


def enumerate_flag(indptr, indices, num_vertices, max_dim, long long ceiling):
    cdef int64_t[::1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef int32_t[::1] ix = np.ascontiguousarray(indices, dtype=np.int32)
    cdef Py_ssize_t n = num_vertices
    cdef Py_ssize_t top
    if max_dim is None or max_dim < 0:
        top = n - 1 if n > 0 else 0
    else:
        top = max_dim

    cdef vector[vector[int32_t]] levels = vector[vector[int32_t]](top + 1)
    cdef vector[int64_t] counts = vector[int64_t](top + 1, 0)
    cdef vector[vector[int32_t]] cands = vector[vector[int32_t]](top + 2)
    cdef vector[Py_ssize_t] pos = vector[Py_ssize_t](top + 2, 0)
    cdef vector[int32_t] prefix = vector[int32_t](top + 1, 0)
    cdef Py_ssize_t v, depth, t, over = -1
    cdef int32_t w
    cdef const int32_t* nb
    cdef Py_ssize_t nn

    with nogil:
        for v in range(n):
            levels[0].push_back(<int32_t>v)
            counts[0] += 1
            if counts[0] > ceiling:
                over = 0
                break
            if top == 0 or ip[v + 1] == ip[v]:
                continue
            prefix[0] = <int32_t>v
            cands[1].assign(&ix[ip[v]], &ix[ip[v]] + (ip[v + 1] - ip[v]))
            pos[1] = 0
            depth = 1
            while depth >= 1:
                if pos[depth] >= <Py_ssize_t>cands[depth].size():
                    depth -= 1
                    continue
                w = cands[depth][pos[depth]]
                pos[depth] += 1
                prefix[depth] = w
                for t in range(depth + 1):
                    levels[depth].push_back(prefix[t])
                counts[depth] += 1
                if counts[depth] > ceiling:
                    over = depth
                    break
                if depth < top:
                    nn = ip[w + 1] - ip[w]
                    if nn == 0:
                        continue
                    nb = &ix[ip[w]]
                    _intersect(cands[depth].data(), cands[depth].size(), nb, nn, cands[depth + 1])
                    if cands[depth + 1].size() > 0:
                        depth += 1
                        pos[depth] = 0
            if over >= 0:
                break

    if over >= 0:
        raise CeilingExceeded(
            f"more than {ceiling} simplices in dimension {over}",
            [c for c in counts if c] or [0],
        )

    result = []
    cdef Py_ssize_t d, k, size
    cdef int32_t[::1] buf
    for d in range(top + 1):
        size = levels[d].size()
        if d > 0 and size == 0:
            break
        arr = np.empty(size, dtype=np.int32)
        buf = arr
        for k in range(size):
            buf[k] = levels[d][k]
        result.append(arr.reshape(-1, d + 1))
    return result


cdef inline int _cmp_row(const int32_t[:, ::1] table, Py_ssize_t r,
                         const int32_t* key, Py_ssize_t k) nogil:
    cdef Py_ssize_t t
    for t in range(k):
        if table[r, t] < key[t]:
            return -1
        if table[r, t] > key[t]:
            return 1
    return 0


def lookup_subfaces(rows, positions, table):
    cdef int32_t[:, ::1] R = np.ascontiguousarray(rows, dtype=np.int32)
    cdef int32_t[:, ::1] P = np.ascontiguousarray(positions, dtype=np.int32)
    cdef int32_t[:, ::1] T = np.ascontiguousarray(table, dtype=np.int32)
    cdef Py_ssize_t n = R.shape[0], npos = P.shape[0], k = P.shape[1]
    cdef Py_ssize_t N = T.shape[0]
    out = np.empty((n, npos), dtype=np.int64)
    cdef int64_t[:, ::1] O = out
    cdef vector[int32_t] key = vector[int32_t](k if k > 0 else 1)
    cdef Py_ssize_t r, p, t, lo, hi, mid
    if T.shape[1] != k and N > 0:
        raise ValueError("table width does not match sub-tuple length")
    with nogil:
        for r in range(n):
            for p in range(npos):
                for t in range(k):
                    key[t] = R[r, P[p, t]]
                lo = 0
                hi = N
                while lo < hi:
                    mid = (lo + hi) >> 1
                    if _cmp_row(T, mid, key.data(), k) < 0:
                        lo = mid + 1
                    else:
                        hi = mid
                if lo < N and _cmp_row(T, lo, key.data(), k) == 0:
                    O[r, p] = lo
                else:
                    O[r, p] = -1
    return out


def gf2_rank(matrix):
    mat = np.asarray(matrix, dtype=np.uint8)
    if mat.size == 0:
        return 0
    cdef Py_ssize_t m = mat.shape[0], ncols = mat.shape[1]
    cdef Py_ssize_t W = (ncols + 63) // 64
    packed = np.zeros((m, W), dtype=np.uint64)
    cdef uint64_t[:, ::1] A = packed
    cdef const unsigned char[:, :] M = mat
    cdef Py_ssize_t i, j, col, word, piv, r = 0
    cdef uint64_t bit, tmp
    with nogil:
        for i in range(m):
            for j in range(ncols):
                if M[i, j] & 1:
                    A[i, j >> 6] |= (<uint64_t>1) << (j & 63)
        for col in range(ncols):
            if r >= m:
                break
            word = col >> 6
            bit = (<uint64_t>1) << (col & 63)
            piv = -1
            for i in range(r, m):
                if A[i, word] & bit:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(W):
                    tmp = A[r, j]
                    A[r, j] = A[piv, j]
                    A[piv, j] = tmp
            for i in range(r + 1, m):
                if A[i, word] & bit:
                    for j in range(word, W):
                        A[i, j] ^= A[r, j]
            r += 1
    return r
