# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the exact ground-truth computations."""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

cnp.import_array()


def fwht(cnp.int64_t[::1] a):
    """In-place unnormalized Walsh-Hadamard transform (length a power of two)."""
    cdef Py_ssize_t n = a.shape[0], h = 1, i, j
    cdef cnp.int64_t u, v
    while h < n:
        i = 0
        while i < n:
            for j in range(i, i + h):
                u = a[j]
                v = a[j + h]
                a[j] = u + v
                a[j + h] = u - v
            i += 2 * h
        h *= 2


def count_linearity_violations(const unsigned char[::1] table, int d, int k):
    """Number of k-tuples (x_1..x_k) with f(x_1)+...+f(x_k) != f(x_1+...+x_k).

    Enumerates all 2^(k d) tuples with an odometer that keeps running XORs
    and parities per level.
    """
    cdef Py_ssize_t n = table.shape[0]
    cdef int lvl
    cdef long long count = 0
    cdef Py_ssize_t *idx = <Py_ssize_t *> malloc(k * sizeof(Py_ssize_t))
    cdef Py_ssize_t *acc = <Py_ssize_t *> malloc((k + 1) * sizeof(Py_ssize_t))
    cdef int *par = <int *> malloc((k + 1) * sizeof(int))
    cdef Py_ssize_t x
    cdef int p
    try:
        for lvl in range(k):
            idx[lvl] = 0
        acc[0] = 0
        par[0] = 0
        for lvl in range(k - 1):
            acc[lvl + 1] = acc[lvl] ^ idx[lvl]
            par[lvl + 1] = par[lvl] ^ table[idx[lvl]]
        while True:
            # innermost level in a tight loop
            x = acc[k - 1]
            p = par[k - 1]
            for i in range(n):
                if (p ^ table[i]) != table[x ^ i]:
                    count += 1
            lvl = k - 2
            while lvl >= 0:
                idx[lvl] += 1
                if idx[lvl] < n:
                    break
                idx[lvl] = 0
                lvl -= 1
            if lvl < 0:
                break
            while lvl < k - 1:
                acc[lvl + 1] = acc[lvl] ^ idx[lvl]
                par[lvl + 1] = par[lvl] ^ table[idx[lvl]]
                lvl += 1
    finally:
        free(idx)
        free(acc)
        free(par)
    return count


def count_quadraticity_violations(const unsigned char[::1] table):
    """Number of triples (x, y, z) with T_f(x, y, z) = 1.

    T_f is the XOR of f over the seven nonempty XOR-combinations of x, y, z.
    """
    cdef Py_ssize_t n = table.shape[0], x, y, z
    cdef long long count = 0
    cdef int a, b
    for x in range(n):
        for y in range(n):
            a = table[x] ^ table[y] ^ table[x ^ y]
            for z in range(n):
                b = a ^ table[z] ^ table[x ^ z] ^ table[y ^ z] ^ table[x ^ y ^ z]
                count += b
    return count


def lnds_length(const cnp.int64_t[::1] values):
    """Length of the longest non-decreasing subsequence (patience sorting)."""
    cdef Py_ssize_t n = values.shape[0], i, lo, hi, mid, size = 0
    cdef cnp.int64_t v
    cdef cnp.int64_t[::1] tails = np.empty(max(n, 1), dtype=np.int64)
    for i in range(n):
        v = values[i]
        lo = 0
        hi = size
        while lo < hi:
            mid = (lo + hi) >> 1
            if tails[mid] <= v:
                lo = mid + 1
            else:
                hi = mid
        tails[lo] = v
        if lo == size:
            size += 1
    return size


def lipschitz_line_changes(const cnp.int64_t[::1] values, long long lo, long long hi):
    """Fewest entries to change so adjacent values differ by at most 1.

    Replacement values range over [lo, hi].
    """
    cdef Py_ssize_t n = values.shape[0], i, v, m = hi - lo + 1
    cdef cnp.int64_t[::1] cur = np.zeros(m, dtype=np.int64)
    cdef cnp.int64_t[::1] nxt = np.zeros(m, dtype=np.int64)
    cdef cnp.int64_t best, c
    for v in range(m):
        cur[v] = 0 if values[0] == lo + v else 1
    for i in range(1, n):
        for v in range(m):
            best = cur[v]
            if v > 0 and cur[v - 1] < best:
                best = cur[v - 1]
            if v + 1 < m and cur[v + 1] < best:
                best = cur[v + 1]
            nxt[v] = best + (0 if values[i] == lo + v else 1)
        cur, nxt = nxt, cur
    best = cur[0]
    for v in range(1, m):
        if cur[v] < best:
            best = cur[v]
    return best


def min_hamming(const unsigned char[::1] table, const unsigned char[:, ::1] codebook):
    """Smallest Hamming distance from table to a row of codebook."""
    cdef Py_ssize_t rows = codebook.shape[0], n = codebook.shape[1], r, i
    cdef Py_ssize_t best = n + 1, dist
    for r in range(rows):
        dist = 0
        for i in range(n):
            if codebook[r, i] != table[i]:
                dist += 1
                if dist >= best:
                    break
        if dist < best:
            best = dist
    return best
