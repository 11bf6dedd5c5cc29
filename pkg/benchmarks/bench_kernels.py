"""Compare the compiled kernels with the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 3]

Prints one line per kernel with the best wall time of each backend and the
speed-up. Results are checked for equality before timing.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from erasure_resilient import _kernels_py as fallback
from erasure_resilient import ground_truth as gt
from erasure_resilient import kernels


def _best(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - start)
    return best, out


def cases(rng):
    g = (1 - 2 * rng.integers(0, 2, 1 << 20)).astype(np.int64)
    tab6 = rng.integers(0, 2, 1 << 6).astype(np.uint8)
    tab8 = rng.integers(0, 2, 1 << 8).astype(np.uint8)
    seq = rng.integers(0, 50, 200_000).astype(np.int64)
    line = rng.integers(0, 8, 5_000).astype(np.int64)
    book = gt.quadratic_codebook(4)
    tab4 = rng.integers(0, 2, 16).astype(np.uint8)

    def fwht(impl):
        a = g.copy()
        impl.fwht(a)
        return a

    return [
        ("fwht d=20", lambda m: fwht(m)),
        ("linearity violations d=6 k=4", lambda m: m.count_linearity_violations(tab6, 6, 4)),
        ("quadraticity violations d=8", lambda m: m.count_quadraticity_violations(tab8)),
        ("lnds n=2e5", lambda m: m.lnds_length(seq)),
        ("lipschitz line n=5e3", lambda m: m.lipschitz_line_changes(line, 0, 7)),
        ("min hamming 2^10 codewords", lambda m: m.min_hamming(tab4, book)),
    ]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if kernels.compiled is None:
        print("compiled extension not available; nothing to compare")
        return 1
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':32s} {'cython s':>10s} {'python s':>10s} {'speed-up':>9s}")
    for name, fn in cases(rng):
        tc, oc = _best(lambda: fn(kernels.compiled), args.repeat)
        tp, op = _best(lambda: fn(fallback), args.repeat)
        if not np.array_equal(np.asarray(oc), np.asarray(op)):
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:32s} {tc:10.4f} {tp:10.4f} {tp / tc:8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
