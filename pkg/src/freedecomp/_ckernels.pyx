# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled table kernels.

Operator tables are contiguous int64 arrays mapping element indices of one
level to element indices of another.  Signatures and return values match
``freedecomp._pykernels`` exactly, including witness choice.
"""
import numpy as np

from libc.stdint cimport int64_t


def compose(const int64_t[::1] outer, const int64_t[::1] inner):
    """Table of ``x -> outer[inner[x]]``."""
    cdef Py_ssize_t n = inner.shape[0], i
    out = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] o = out
    for i in range(n):
        o[i] = outer[inner[i]]
    return out


def first_mismatch(const int64_t[::1] a, const int64_t[::1] b):
    """Smallest index where the tables differ, or -1."""
    cdef Py_ssize_t n = a.shape[0], i
    if b.shape[0] != n:
        raise ValueError("tables of different length")
    for i in range(n):
        if a[i] != b[i]:
            return i
    return -1


def pullback_check(const int64_t[::1] f, const int64_t[::1] g,
                   const int64_t[::1] h, const int64_t[::1] k,
                   Py_ssize_t n_b, Py_ssize_t n_c, Py_ssize_t n_d):
    """Decide whether the square P -f-> B -h-> D, P -g-> C -k-> D is a pullback.

    Returns ``(code, u, v)``: 0 pass; 1 the square does not commute at
    ``p = u``; 2 elements ``u < v`` of P hit the same fiber-product pair;
    3 the pair ``(b, c) = (u, v)`` of the fiber product is not hit.
    """
    cdef Py_ssize_t n_p = f.shape[0], p, i, b, c, d, lo, hi, mid
    cdef int64_t key, best_second, best_first
    for p in range(n_p):
        if h[f[p]] != k[g[p]]:
            return (1, p, -1)

    keys_arr = np.empty(n_p, dtype=np.int64)
    cdef int64_t[::1] keys = keys_arr
    for p in range(n_p):
        keys[p] = f[p] * <int64_t>n_c + g[p]
    order_arr = np.argsort(keys_arr, kind="stable").astype(np.int64)
    cdef int64_t[::1] order = order_arr
    sorted_arr = keys_arr[order_arr]
    cdef int64_t[::1] skeys = sorted_arr

    # duplicate groups: the witness is the group whose second member is smallest
    best_second = -1
    best_first = -1
    i = 0
    while i + 1 < n_p:
        if skeys[i] == skeys[i + 1]:
            if best_second < 0 or order[i + 1] < best_second:
                best_second = order[i + 1]
                best_first = order[i]
            key = skeys[i]
            while i + 1 < n_p and skeys[i + 1] == key:
                i += 1
        i += 1
    if best_second >= 0:
        return (2, best_first, best_second)

    cnt_b_arr = np.zeros(n_d, dtype=np.int64)
    cnt_c_arr = np.zeros(n_d, dtype=np.int64)
    cdef int64_t[::1] cnt_b = cnt_b_arr
    cdef int64_t[::1] cnt_c = cnt_c_arr
    for b in range(n_b):
        cnt_b[h[b]] += 1
    for c in range(n_c):
        cnt_c[k[c]] += 1
    cdef int64_t fiber = 0
    for d in range(n_d):
        fiber += cnt_b[d] * cnt_c[d]
    if fiber == n_p:
        return (0, -1, -1)

    # lexicographically first (b, c) over the same point that is not hit
    for b in range(n_b):
        for c in range(n_c):
            if k[c] != h[b]:
                continue
            key = b * <int64_t>n_c + c
            lo = 0
            hi = n_p
            while lo < hi:
                mid = (lo + hi) // 2
                if skeys[mid] < key:
                    lo = mid + 1
                else:
                    hi = mid
            if lo >= n_p or skeys[lo] != key:
                return (3, b, c)
    raise AssertionError("fiber count mismatch without a missing pair")


def fiber_offsets(const int64_t[::1] table, Py_ssize_t n_target):
    """CSR grouping of a table by target: ``(starts, members)``.

    ``members[starts[y]:starts[y+1]]`` lists the x with ``table[x] == y`` in
    increasing order.
    """
    cdef Py_ssize_t n = table.shape[0], x, y
    starts_arr = np.zeros(n_target + 1, dtype=np.int64)
    cdef int64_t[::1] starts = starts_arr
    for x in range(n):
        starts[table[x] + 1] += 1
    for y in range(n_target):
        starts[y + 1] += starts[y]
    members_arr = np.empty(n, dtype=np.int64)
    fill_arr = starts_arr[:-1].copy()
    cdef int64_t[::1] members = members_arr
    cdef int64_t[::1] fill = fill_arr
    for x in range(n):
        y = table[x]
        members[fill[y]] = x
        fill[y] += 1
    return starts_arr, members_arr
