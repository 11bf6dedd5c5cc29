"""Exact and sampled oracles for distances and violation probabilities.

Exact results are ``Fraction`` objects built from integer counts, so theorem
checks compare rationals rather than floats.

Linear functions are parities x -> <S, x> and quadratic functions are sums
of monomials x[i] and x[i]x[j]; neither class includes a constant term.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import kernels
from .core import BooleanFunction, DimensionError, Point, SequenceFunction, parity_table
from .stats import wilson_interval


@dataclass(frozen=True)
class FourierSpectrum:
    """Fourier spectrum of g = (-1)^f.

    ``counts[S]`` is the integer sum over x of g(x) * chi_S(x); the
    coefficient is ``counts[S] / 2^d``.
    """

    d: int
    counts: np.ndarray

    @property
    def coeffs(self) -> np.ndarray:
        return self.counts / float(1 << self.d)

    def coefficient(self, S: int) -> Fraction:
        return Fraction(int(self.counts[S]), 1 << self.d)


@dataclass(frozen=True)
class SampledProbability:
    """A Monte Carlo estimate with a two-sided 99% Wilson interval."""

    hits: int
    samples: int
    lo: float
    hi: float

    @property
    def estimate(self) -> float:
        return self.hits / self.samples


def walsh_hadamard(f: BooleanFunction) -> FourierSpectrum:
    if f.d > 24:
        raise DimensionError("spectrum limited to d <= 24")
    g = 1 - 2 * f.table.astype(np.int64)
    return FourierSpectrum(f.d, kernels.fwht(g))


def naive_spectrum(f: BooleanFunction) -> FourierSpectrum:
    """Spectrum by direct inner products, O(4^d). Cross-check only."""
    n = f.size
    par = parity_table(f.d).astype(np.int64)
    g = 1 - 2 * f.table.astype(np.int64)
    idx = np.arange(n)
    counts = np.array([int((g * (1 - 2 * par[idx & S])).sum()) for S in range(n)], dtype=np.int64)
    return FourierSpectrum(f.d, counts)


def distance_to_linearity(f: BooleanFunction) -> Fraction:
    """1/2 - 1/2 max_S g^(S), as an exact fraction."""
    spec = walsh_hadamard(f)
    n = f.size
    return Fraction(n - int(spec.counts.max()), 2 * n)


def distance_to_linearity_enum(f: BooleanFunction) -> Fraction:
    """Minimum Hamming distance to every parity, by enumeration (d <= 12)."""
    if f.d > 12:
        raise DimensionError("enumeration limited to d <= 12")
    n = f.size
    idx = np.arange(n)
    par = parity_table(f.d)
    tab = f.table
    best = min(int(np.count_nonzero(par[idx & S] != tab)) for S in range(n))
    return Fraction(best, n)


def violation_probability_linearity(f: BooleanFunction, k: int, mode: str = "auto",
                                    samples: int = 10**6, seed=0):
    """Pr over uniform k-tuples that sum f(x_i) != f(xor x_i).

    Exact (a Fraction) when k*d <= 24 or mode="exact"; otherwise a
    ``SampledProbability``.
    """
    if mode == "auto":
        mode = "exact" if k * f.d <= 24 else "sampled"
    if mode == "exact":
        count = kernels.count_linearity_violations(f.table, f.d, k)
        return Fraction(count, 1 << (k * f.d))
    rng = np.random.default_rng(seed)
    tab = f.table
    hits = 0
    chunk = 1 << 16
    left = samples
    while left:
        m = min(chunk, left)
        xs = rng.integers(0, f.size, size=(m, k))
        s = np.bitwise_xor.reduce(xs, axis=1)
        par = tab[xs].sum(axis=1) & 1
        hits += int(np.count_nonzero(par != tab[s]))
        left -= m
    lo, hi = wilson_interval(hits, samples)
    return SampledProbability(hits, samples, lo, hi)


def linearity_violation_fourier(f: BooleanFunction, k: int) -> Fraction:
    """The same probability via 1/2 - 1/2 sum_S g^(S)^(k+1)."""
    counts = [int(c) for c in walsh_hadamard(f).counts]
    n = f.size
    total = sum(c ** (k + 1) for c in counts)
    return Fraction(1, 2) - Fraction(total, 2 * n ** (k + 1))


def eval_T(f: BooleanFunction, x, y, z) -> int:
    """XOR of f over the seven nonempty XOR-combinations of x, y, z."""
    xs = []
    for p in (x, y, z):
        if isinstance(p, Point):
            if p.d != f.d:
                raise DimensionError("point dimension does not match f")
            p = p.bits
        xs.append(int(p))
    x, y, z = xs
    v = f.value
    return (v(x) ^ v(y) ^ v(z) ^ v(x ^ y) ^ v(x ^ z) ^ v(y ^ z) ^ v(x ^ y ^ z))


def violation_probability_quadraticity(f: BooleanFunction, mode: str = "auto",
                                       samples: int = 10**6, seed=0):
    """eta = Pr over uniform triples that T_f = 1."""
    if mode == "auto":
        mode = "exact" if 3 * f.d <= 24 else "sampled"
    if mode == "exact":
        return Fraction(kernels.count_quadraticity_violations(f.table), 1 << (3 * f.d))
    rng = np.random.default_rng(seed)
    tab = f.table
    hits = 0
    left = samples
    while left:
        m = min(1 << 16, left)
        x, y, z = rng.integers(0, f.size, size=(3, m))
        val = tab[x] ^ tab[y] ^ tab[z] ^ tab[x ^ y] ^ tab[x ^ z] ^ tab[y ^ z] ^ tab[x ^ y ^ z]
        hits += int(val.sum())
        left -= m
    lo, hi = wilson_interval(hits, samples)
    return SampledProbability(hits, samples, lo, hi)


def quadratic_monomials(d: int) -> list[tuple[int, ...]]:
    """The d + C(d,2) monomials x[i] and x[i]x[j], 1-indexed."""
    return [(i,) for i in range(1, d + 1)] + list(itertools.combinations(range(1, d + 1), 2))


def monomial_table(d: int, mono: tuple[int, ...]) -> np.ndarray:
    idx = np.arange(1 << d)
    out = np.ones(1 << d, dtype=np.uint8)
    for i in mono:
        out &= ((idx >> (i - 1)) & 1).astype(np.uint8)
    return out


@lru_cache(maxsize=None)
def quadratic_codebook(d: int) -> np.ndarray:
    """Truth tables of all constant-free quadratics, one per row."""
    if d > 5:
        raise DimensionError("codebook limited to d <= 5")
    monos = quadratic_monomials(d)
    basis = np.stack([monomial_table(d, m) for m in monos]).astype(np.int64)
    coeffs = ((np.arange(1 << len(monos))[:, None] >> np.arange(len(monos))[None, :]) & 1)
    book = ((coeffs @ basis) & 1).astype(np.uint8)
    book.setflags(write=False)
    return book


def distance_to_quadraticity(f: BooleanFunction) -> Fraction:
    if f.d > 4:
        raise DimensionError("exact quadratic distance limited to d <= 4")
    return Fraction(kernels.min_hamming(f.table, quadratic_codebook(f.d)), f.size)


def distance_to_sortedness(seq: SequenceFunction) -> Fraction:
    """(n - LNDS) / n."""
    return Fraction(seq.n - kernels.lnds_length(seq.values), seq.n)


def boolean_sortedness_distance(values: np.ndarray) -> Fraction:
    """Distance to sortedness for a 0/1 sequence: best split into zeros then ones."""
    v = np.asarray(values, dtype=np.int64)
    n = v.size
    # keep zeros in v[:s] and ones in v[s:]
    zeros_before = np.concatenate(([0], np.cumsum(v == 0)))
    ones_after = np.concatenate((np.cumsum((v == 1)[::-1])[::-1], [0]))
    return Fraction(n - int((zeros_before + ones_after).max()), n)


def distance_to_lipschitz_line(seq: SequenceFunction) -> Fraction:
    v = seq.values
    return Fraction(kernels.lipschitz_line_changes(v, int(v.min()), int(v.max())), seq.n)


@lru_cache(maxsize=None)
def lipschitz_cube_codebook(d: int, lo: int, hi: int) -> np.ndarray:
    """All integer-valued Lipschitz functions {0,1}^d -> [lo, hi]."""
    n = 1 << d
    m = hi - lo + 1
    if m ** n > 10**7:
        raise DimensionError("Lipschitz enumeration too large")
    cands = np.array(list(itertools.product(range(lo, hi + 1), repeat=n)), dtype=np.int64)
    ok = np.ones(len(cands), dtype=bool)
    for x in range(n):
        for b in range(d):
            y = x ^ (1 << b)
            if x < y:
                ok &= np.abs(cands[:, x] - cands[:, y]) <= 1
    book = cands[ok].astype(np.uint8)
    book.setflags(write=False)
    return book


def distance_to_lipschitz_cube(f: BooleanFunction) -> Fraction:
    """Exact distance to Lipschitz (w.r.t. Hamming distance) for d <= 3.

    Clamping to [min f, max f] and taking floors keeps a Lipschitz repair
    Lipschitz and keeps the agreeing entries, so integer candidates in that
    range suffice.
    """
    if f.d > 3:
        raise DimensionError("exact cube Lipschitz distance limited to d <= 3")
    tab = f.table
    book = lipschitz_cube_codebook(f.d, int(tab.min()), int(tab.max()))
    return Fraction(kernels.min_hamming(tab, book), f.size)


def is_lipschitz_line(values) -> bool:
    v = np.asarray(values, dtype=np.int64)
    return bool(np.all(np.abs(np.diff(v)) <= 1))


def is_lipschitz_cube(f: BooleanFunction) -> bool:
    tab = f.table.astype(np.int64)
    idx = np.arange(f.size)
    return all(bool(np.all(np.abs(tab - tab[idx ^ (1 << b)]) <= 1)) for b in range(f.d))


def is_sorted(values) -> bool:
    v = np.asarray(values)
    return bool(np.all(v[:-1] <= v[1:]))


# ------------------------------------------------------------ witness checks

def _gf2_consistent(rows: list[int], rhs: list[int]) -> bool:
    """Whether the GF(2) system <row, g> = rhs has a solution."""
    basis: dict[int, tuple[int, int]] = {}
    for row, b in zip(rows, rhs):
        while row:
            top = row.bit_length() - 1
            if top not in basis:
                basis[top] = (row, b)
                break
            brow, bb = basis[top]
            row ^= brow
            b ^= bb
        else:
            if b:
                return False
    return True


def linear_consistent(points: list[int], values: list[int]) -> bool:
    """Whether some parity <S, x> matches every (point, value) pair."""
    return _gf2_consistent([int(p) for p in points], [int(v) & 1 for v in values])


def quadratic_consistent(points: list[int], values: list[int], d: int) -> bool:
    """Whether some constant-free quadratic matches every (point, value) pair."""
    monos = quadratic_monomials(d)
    rows = []
    for p in points:
        p = int(p)
        row = 0
        for k, mono in enumerate(monos):
            if all((p >> (i - 1)) & 1 for i in mono):
                row |= 1 << k
        rows.append(row)
    return _gf2_consistent(rows, [int(v) & 1 for v in values])


def sorted_consistent(points: list[int], values: list[int]) -> bool:
    """Whether some non-decreasing sequence matches every (index, value) pair."""
    pairs = sorted(zip(map(int, points), map(int, values)))
    for (i, a), (j, b) in zip(pairs, pairs[1:]):
        if (i == j and a != b) or a > b:
            return False
    return True


def witness_is_valid(witness, d: int | None = None) -> bool:
    """Independent check that no function with the property fits the witness."""
    if any(not isinstance(v, (int, np.integer)) for v in witness.values):
        return False
    prop = witness.property_id
    if prop == "linearity":
        return not linear_consistent(witness.points, witness.values)
    if prop == "quadraticity":
        if d is None:
            d = max(int(p).bit_length() for p in witness.points) or 1
        return not quadratic_consistent(witness.points, witness.values, d)
    if prop == "sortedness":
        return not sorted_consistent(witness.points, witness.values)
    raise ValueError(f"unknown property {prop!r}")


def linearity_parity_check(witness) -> bool:
    """The support values XOR to something other than the last support value."""
    sup = list(witness.support)
    if len(sup) < 2:
        return False
    *inner, last = sup
    acc = 0
    for i in inner:
        acc ^= int(witness.values[i])
    pt = 0
    for i in inner:
        pt ^= int(witness.points[i])
    return pt == int(witness.points[last]) and acc != int(witness.values[last])


# ------------------------------------------------------ exhaustive suites

def all_functions(d: int):
    n = 1 << d
    bits = np.arange(n)
    for code in range(1 << n):
        yield BooleanFunction(d, ((code >> bits) & 1).astype(np.uint8))


def check_linearity_theorem(d: int = 3, ks=(2, 4)) -> dict:
    """Even-k violation probability >= distance, for every function on d bits."""
    failures = []
    checked = 0
    for f in all_functions(d):
        dist = distance_to_linearity(f)
        for k in ks:
            if violation_probability_linearity(f, k, mode="exact") < dist:
                failures.append((f.table.tobytes().hex(), k))
            checked += 1
    return {"checked": checked, "failures": failures, "passed": not failures}


def check_odd_counterexample(d: int = 3, k: int = 3) -> dict:
    """f(x) = x[1] + 1 is 1/2-far from linear yet has no violating k-tuple for odd k."""
    idx = np.arange(1 << d)
    f = BooleanFunction(d, ((idx & 1) ^ 1).astype(np.uint8))
    count = kernels.count_linearity_violations(f.table, d, k)
    dist = distance_to_linearity(f)
    return {"violations": count, "distance": dist, "passed": count == 0 and dist == Fraction(1, 2)}


def check_eta_bound(d: int = 3) -> dict:
    """eta >= min(7/3 eps_f, 1/40) for every function on d bits."""
    failures = []
    checked = 0
    for f in all_functions(d):
        eta = violation_probability_quadraticity(f, mode="exact")
        eps = distance_to_quadraticity(f)
        if eta < min(Fraction(7, 3) * eps, Fraction(1, 40)):
            failures.append(f.table.tobytes().hex())
        checked += 1
    return {"checked": checked, "failures": failures, "passed": not failures}


def check_parseval(trials: int = 1000, max_d: int = 10, seed: int = 0) -> dict:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        d = int(rng.integers(1, max_d + 1))
        f = BooleanFunction(d, rng.integers(0, 2, 1 << d, dtype=np.uint8))
        worst = max(worst, abs(float((walsh_hadamard(f).coeffs ** 2).sum()) - 1.0))
    return {"max_error": worst, "passed": worst <= 1e-9}


def hoeffding_far_bound(d: int, eps: float) -> float:
    """Upper bound on Pr[a uniform function is not eps-far from linear]."""
    gap = 0.5 - eps
    if gap <= 0:
        return 1.0
    return min(1.0, math.exp(d * math.log(2) - 2 * (1 << d) * gap * gap))
