"""Confidence intervals, homogeneity tests and seed derivation."""

from __future__ import annotations

import math

import numpy as np
from scipy import stats as _st

Z99 = float(_st.norm.ppf(0.995))


def wilson_interval(hits: int, n: int, z: float = Z99) -> tuple[float, float]:
    """Two-sided Wilson score interval (99% by default)."""
    if n <= 0:
        return 0.0, 1.0
    p = hits / n
    z2 = z * z
    denom = 1 + z2 / n
    centre = (p + z2 / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


def homogeneity_pvalue(a: dict, b: dict) -> float:
    """Chi-square p-value that two categorical samples share a distribution.

    ``a`` and ``b`` map category -> count. Categories empty in both are dropped.
    """
    cats = sorted(set(a) | set(b), key=repr)
    table = np.array([[a.get(c, 0) for c in cats], [b.get(c, 0) for c in cats]], dtype=np.int64)
    table = table[:, table.sum(axis=0) > 0]
    if table.shape[1] < 2:
        return 1.0
    return float(_st.chi2_contingency(table, correction=False)[1])


def goodness_of_fit_pvalue(counts, probs) -> float:
    counts = np.asarray(counts, dtype=float)
    expected = np.asarray(probs, dtype=float) * counts.sum()
    return float(_st.chisquare(counts, expected)[1])


def derive_seed(master: int, index: int, stream: int = 0) -> int:
    """A 63-bit seed that depends only on (master, index, stream)."""
    ss = np.random.SeedSequence([int(master) & (2**63 - 1), int(index), int(stream)])
    return int(ss.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))
