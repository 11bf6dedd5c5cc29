"""Pure numpy fallback for the compiled kernels.

The counting routines here take a different route from the compiled ones
(distribution convolutions instead of enumeration), so the two backends
double as independent checks on each other.
"""

from __future__ import annotations

from bisect import bisect_right

import numpy as np


def fwht(a: np.ndarray) -> None:
    n = a.shape[0]
    h = 1
    while h < n:
        v = a.reshape(-1, 2, h)
        u = v[:, 0, :].copy()
        v[:, 0, :] += v[:, 1, :]
        v[:, 1, :] = u - v[:, 1, :]
        h *= 2


def count_linearity_violations(table: np.ndarray, d: int, k: int) -> int:
    """Counts via the joint distribution of (x_1+...+x_j, f(x_1)+...+f(x_j))."""
    n = 1 << d
    table = np.asarray(table, dtype=np.int64)
    idx = np.arange(n)
    # dist[p, s] = number of j-tuples with parity p and sum s
    one = np.zeros((2, n), dtype=np.int64)
    one[table, idx] = 1
    dist = one.copy()
    for _ in range(k - 1):
        new = np.zeros_like(dist)
        for p in (0, 1):
            for x in range(n):
                if one[p, x] == 0:
                    continue
                shifted = dist[:, idx ^ x]
                new[p] += shifted[0]
                new[1 - p] += shifted[1]
        dist = new
    # a tuple violates when its parity differs from f(sum)
    return int(dist[1 - table, idx].sum())


def count_quadraticity_violations(table: np.ndarray) -> int:
    t = np.asarray(table, dtype=np.uint8)
    n = t.size
    idx = np.arange(n)
    yz = idx[:, None] ^ idx[None, :]
    base_yz = t[idx][:, None] ^ t[idx][None, :] ^ t[yz]
    total = 0
    for x in range(n):
        val = (t[x] ^ t[x ^ idx][:, None] ^ t[x ^ idx][None, :] ^ t[x ^ yz]) ^ base_yz
        total += int(val.sum())
    return total


def lnds_length(values: np.ndarray) -> int:
    tails: list[int] = []
    for v in np.asarray(values).tolist():
        pos = bisect_right(tails, v)
        if pos == len(tails):
            tails.append(v)
        else:
            tails[pos] = v
    return len(tails)


def lipschitz_line_changes(values: np.ndarray, lo: int, hi: int) -> int:
    vals = np.asarray(values, dtype=np.int64)
    levels = np.arange(lo, hi + 1)
    big = np.iinfo(np.int64).max // 4
    cur = (levels != vals[0]).astype(np.int64)
    for a in vals[1:]:
        left = np.concatenate(([big], cur[:-1]))
        right = np.concatenate((cur[1:], [big]))
        cur = np.minimum(np.minimum(cur, left), right) + (levels != a)
    return int(cur.min())


def min_hamming(table: np.ndarray, codebook: np.ndarray) -> int:
    return int((codebook != np.asarray(table)[None, :]).sum(axis=1).min())
