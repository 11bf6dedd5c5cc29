"""Kernel backend selection.

The compiled extension is used when it imports. Setting the environment
variable ``ERASURE_RESILIENT_PURE=1`` forces the numpy fallback.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_py as fallback

compiled = None
if os.environ.get("ERASURE_RESILIENT_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as compiled  # type: ignore[no-redef]
    except ImportError:
        compiled = None

_impl = compiled if compiled is not None else fallback
BACKEND = "cython" if compiled is not None else "python"


def fwht(a: np.ndarray) -> np.ndarray:
    """Walsh-Hadamard transform of an integer vector (returns a new int64 array)."""
    out = np.array(a, dtype=np.int64, copy=True)
    if out.size & (out.size - 1):
        raise ValueError("length must be a power of two")
    _impl.fwht(out)
    return out


def count_linearity_violations(table: np.ndarray, d: int, k: int) -> int:
    if k < 1:
        raise ValueError("k must be at least 1")
    t = np.ascontiguousarray(table, dtype=np.uint8)
    if k == 1:
        # f(x) != f(x) never holds
        return 0
    return int(_impl.count_linearity_violations(t, d, k))


def count_quadraticity_violations(table: np.ndarray) -> int:
    return int(_impl.count_quadraticity_violations(np.ascontiguousarray(table, dtype=np.uint8)))


def lnds_length(values: np.ndarray) -> int:
    return int(_impl.lnds_length(np.ascontiguousarray(values, dtype=np.int64)))


def lipschitz_line_changes(values: np.ndarray, lo: int, hi: int) -> int:
    return int(_impl.lipschitz_line_changes(np.ascontiguousarray(values, dtype=np.int64), lo, hi))


def min_hamming(table: np.ndarray, codebook: np.ndarray) -> int:
    return int(_impl.min_hamming(np.ascontiguousarray(table, dtype=np.uint8),
                                 np.ascontiguousarray(codebook, dtype=np.uint8)))
