# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled speed kernels; semantics identical to ``_fallback``."""

from libc.stdlib cimport free, malloc

BACKEND = "native"


cdef inline void _longest_match(Py_UCS4 *a, Py_UCS4 *b,
                                Py_ssize_t alo, Py_ssize_t ahi,
                                Py_ssize_t blo, Py_ssize_t bhi,
                                Py_ssize_t *row,
                                Py_ssize_t *out_i, Py_ssize_t *out_j,
                                Py_ssize_t *out_size) noexcept:
    # row[j] = length of the common run ending at (i-1, j-1); the row is
    # updated right-to-left so only one buffer is needed.
    cdef Py_ssize_t i, j, k, besti, bestj, bestsize
    cdef Py_UCS4 ch
    besti = alo
    bestj = blo
    bestsize = 0
    for j in range(blo, bhi + 1):
        row[j] = 0
    for i in range(alo, ahi):
        ch = a[i]
        for j in range(bhi - 1, blo - 1, -1):
            if b[j] == ch:
                k = (row[j - 1] if j > blo else 0) + 1
                row[j] = k
            else:
                row[j] = 0
        # scan left-to-right for the tie rule: smallest j wins at equal size
        for j in range(blo, bhi):
            k = row[j]
            if k > bestsize:
                besti = i - k + 1
                bestj = j - k + 1
                bestsize = k
    out_i[0] = besti
    out_j[0] = bestj
    out_size[0] = bestsize


def gestalt_match_total(str a, str b):
    """Total matched characters, leftmost-longest decomposition."""
    cdef Py_ssize_t la = len(a), lb = len(b)
    if la == 0 or lb == 0:
        return 0
    cdef Py_UCS4 *ca = <Py_UCS4 *> malloc(la * sizeof(Py_UCS4))
    cdef Py_UCS4 *cb = <Py_UCS4 *> malloc(lb * sizeof(Py_UCS4))
    cdef Py_ssize_t *row = <Py_ssize_t *> malloc((lb + 1) * sizeof(Py_ssize_t))
    if ca == NULL or cb == NULL or row == NULL:
        free(ca); free(cb); free(row)
        raise MemoryError()
    cdef Py_ssize_t i, j, size, total = 0
    cdef Py_ssize_t alo, ahi, blo, bhi
    for i in range(la):
        ca[i] = a[i]
    for j in range(lb):
        cb[j] = b[j]
    stack = [(0, la, 0, lb)]
    try:
        while stack:
            alo, ahi, blo, bhi = stack.pop()
            if alo >= ahi or blo >= bhi:
                continue
            _longest_match(ca, cb, alo, ahi, blo, bhi, row, &i, &j, &size)
            if size == 0:
                continue
            total += size
            stack.append((alo, i, blo, j))
            stack.append((i + size, ahi, j + size, bhi))
    finally:
        free(ca); free(cb); free(row)
    return total


def signed_rank_tail_count(ranks2, long long m2):
    """Subsets of the doubled ranks with sum <= m2 (exact count)."""
    cdef Py_ssize_t n = len(ranks2)
    if n > 40:
        raise OverflowError("tail count may exceed 64 bits; use the fallback")
    if m2 < 0:
        return 0
    cdef long long total2 = 0
    cdef Py_ssize_t idx
    cdef long long r
    for idx in range(n):
        total2 += <long long> ranks2[idx]
    if m2 >= total2:
        return 1 << n
    cdef long long cap = m2
    cdef unsigned long long *ways = <unsigned long long *> malloc(
        (cap + 1) * sizeof(unsigned long long))
    if ways == NULL:
        raise MemoryError()
    cdef long long s
    cdef unsigned long long acc = 0
    try:
        for s in range(cap + 1):
            ways[s] = 0
        ways[0] = 1
        for idx in range(n):
            r = <long long> ranks2[idx]
            for s in range(cap, r - 1, -1):
                ways[s] += ways[s - r]
        for s in range(cap + 1):
            acc += ways[s]
    finally:
        free(ways)
    return acc
