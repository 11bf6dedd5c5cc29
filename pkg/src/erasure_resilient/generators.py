"""Seeded input constructors: property members, far instances and hard distributions."""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import ground_truth as gt
from .core import BooleanFunction, SequenceFunction, check_dim

MEMBER = "member"
FAR = "far"
UNKNOWN = "unknown"


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_bits(rng: np.random.Generator, n: int) -> np.ndarray:
    """n independent fair bits as uint8."""
    raw = np.frombuffer(rng.bytes((n + 7) // 8), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n]


def parity_function(d: int, S: int) -> BooleanFunction:
    """x -> <S, x> mod 2, evaluated on demand and materialized lazily."""
    check_dim(d)
    return BooleanFunction(d, rule=lambda x: (x & S).bit_count() & 1,
                           vector_rule=lambda idx: (np.bitwise_count(idx & S) & 1).astype(np.uint8),
                           meta={"kind": "linear", "S": S})


def random_linear(d: int, seed=None) -> BooleanFunction:
    """Uniform parity over all S in [d] (no constant term)."""
    S = int(_rng(seed).integers(0, 1 << check_dim(d)))
    return parity_function(d, S)


def quadratic_function(d: int, linear: int, pairs: list[int]) -> BooleanFunction:
    """sum_{i in linear} x[i] + sum_{i<j, j in pairs[i]} x[i] x[j].

    ``linear`` is a bitmask; ``pairs[i]`` is a bitmask of partners j > i of
    coordinate i (0-indexed bits).
    """
    pairs = [int(p) for p in pairs]
    active = [(1 << i, p) for i, p in enumerate(pairs) if p]

    def rule(x: int) -> int:
        v = (x & linear).bit_count()
        for bit, p in active:
            if x & bit:
                v += (x & p).bit_count()
        return v & 1

    def vector_rule(idx: np.ndarray) -> np.ndarray:
        v = np.bitwise_count(idx & linear).astype(np.uint8)
        for bit, p in active:
            v ^= ((idx & bit) != 0).astype(np.uint8) & (np.bitwise_count(idx & p) & 1).astype(np.uint8)
        return v & 1

    return BooleanFunction(d, rule=rule, vector_rule=vector_rule,
                           meta={"kind": "quadratic", "linear": linear, "pairs": pairs})


def random_quadratic(d: int, seed=None) -> BooleanFunction:
    """Uniform coefficients over the d + C(d,2) monomials x[i], x[i]x[j]."""
    check_dim(d)
    rng = _rng(seed)
    linear = int(rng.integers(0, 1 << d))
    pairs = []
    for i in range(d):
        width = d - i - 1
        pairs.append((int(rng.integers(0, 1 << width)) << (i + 1)) if width else 0)
    return quadratic_function(d, linear, pairs)


def uniform_function(d: int, seed=None) -> BooleanFunction:
    """A uniformly random table, no checks."""
    check_dim(d)
    return BooleanFunction(d, random_bits(_rng(seed), 1 << d))


def random_far_function(d: int, eps: float, seed=None, max_tries: int = 1000) -> BooleanFunction:
    """Uniform random function resampled until it is eps-far from linear.

    Distances are certified by the spectrum for d <= 24. Above that the
    spectrum does not fit in memory and the sample is accepted only when the
    Hoeffding bound on failure is below 1e-9.
    """
    if not 0 < eps <= 0.5:
        raise ValueError("no Boolean function is more than 1/2-far from linear")
    check_dim(d)
    rng = _rng(seed)
    if d > 24:
        if gt.hoeffding_far_bound(d, eps) > 1e-9:
            raise ValueError(f"cannot certify eps={eps} at d={d} without the spectrum")
        f = BooleanFunction(d, random_bits(rng, 1 << d))
        f.meta = {"kind": "far", "certified": "hoeffding", "tries": 1}
        return f
    for tries in range(1, max_tries + 1):
        f = BooleanFunction(d, random_bits(rng, 1 << d))
        dist = gt.distance_to_linearity(f)
        if dist >= eps:
            f.meta = {"kind": "far", "certified": "spectrum", "distance": dist, "tries": tries}
            return f
    raise RuntimeError(f"no {eps}-far sample in {max_tries} tries")


def far_cubic(d: int) -> BooleanFunction:
    """f(x) = x[1] x[2] x[3]."""
    if check_dim(d) < 3:
        raise ValueError("far_cubic needs d >= 3")
    return BooleanFunction(d, rule=lambda x: 1 if x & 7 == 7 else 0,
                           vector_rule=lambda idx: ((idx & 7) == 7).astype(np.uint8),
                           meta={"kind": "far_cubic"})


# ---------------------------------------------------------- hard distributions

def _need_even(n: int, mult: int) -> None:
    if n < mult or n % mult:
        raise ValueError(f"n must be a positive multiple of {mult}")


def sortedness_dplus(n: int, seed=None) -> SequenceFunction:
    """Per block i: (2i-1, 2i-1), (2i-1, 2i) or (2i, 2i), each w.p. 1/3."""
    _need_even(n, 2)
    c = _rng(seed).integers(0, 3, n // 2)
    lo = 2 * np.arange(1, n // 2 + 1) - 1
    vals = np.empty(n, dtype=np.int64)
    vals[0::2] = lo + (c == 2)
    vals[1::2] = lo + (c >= 1)
    return SequenceFunction(vals)


def sortedness_dminus(n: int, seed=None) -> SequenceFunction:
    """Per block i: (2i, 2i-1) w.p. 1/3, else (2i-1, 2i)."""
    _need_even(n, 2)
    desc = _rng(seed).integers(0, 3, n // 2) == 0
    lo = 2 * np.arange(1, n // 2 + 1) - 1
    vals = np.empty(n, dtype=np.int64)
    vals[0::2] = lo + desc
    vals[1::2] = lo + ~desc
    return SequenceFunction(vals)


_LINE_PLUS = {1: ((0, 1), (1, 2)), 3: ((1, 0), (2, 1))}
_LINE_MINUS = {1: ((0, 2), (1, 1)), 3: ((2, 0), (1, 1))}


def _line(n: int, seed, table) -> SequenceFunction:
    _need_even(n, 4)
    coin = _rng(seed).integers(0, 2, n // 2)
    vals = np.empty(n, dtype=np.int64)
    for b in range(n // 2):
        i = 2 * b + 1  # 1-indexed block start, i mod 4 in {1, 3}
        vals[i - 1], vals[i] = table[i % 4][coin[b]]
    return SequenceFunction(vals)


def lipschitz_line_dplus(n: int, seed=None) -> SequenceFunction:
    return _line(n, seed, _LINE_PLUS)


def lipschitz_line_dminus(n: int, seed=None) -> SequenceFunction:
    return _line(n, seed, _LINE_MINUS)


def _cube(d: int, seed, pairs) -> BooleanFunction:
    check_dim(d)
    n = 1 << d
    base = np.arange(0, n, 2)  # points with x[1] = 0
    coin = _rng(seed).integers(0, 2, base.size)
    tab = np.empty(n, dtype=np.uint8)
    opts = np.array(pairs, dtype=np.uint8)
    tab[base] = opts[coin, 0]
    tab[base | 1] = opts[coin, 1]
    return BooleanFunction(d, tab, range_size=3)


def lipschitz_cube_dplus(d: int, seed=None) -> BooleanFunction:
    return _cube(d, seed, ((0, 1), (1, 2)))


def lipschitz_cube_dminus(d: int, seed=None) -> BooleanFunction:
    return _cube(d, seed, ((0, 2), (1, 1)))


def sorted_sequence(n: int, r: int = 2, seed=None) -> SequenceFunction:
    """Non-decreasing sequence with values 0..r-1, evaluated on demand."""
    if not 1 <= r <= n:
        raise ValueError("need 1 <= r <= n")
    rng = _rng(seed)
    cuts = sorted(int(c) + 2 for c in rng.choice(n - 1, size=r - 1, replace=False))
    return SequenceFunction(rule=lambda i: bisect.bisect_right(cuts, i), n=n, r=r)


def far_boolean_sequence(n: int, eps: float, seed=None, slack: float = 0.01,
                         max_tries: int = 100) -> SequenceFunction:
    """0^(n/2) 1^(n/2) with each entry flipped w.p. eps + slack, kept once eps-far.

    Distance is certified with the LNDS kernel.
    """
    _need_even(n, 2)
    if not 0 < eps < 0.5:
        raise ValueError("eps must lie in (0, 1/2)")
    rng = _rng(seed)
    base = np.zeros(n, dtype=np.uint8)
    base[n // 2:] = 1
    for tries in range(1, max_tries + 1):
        flips = rng.random(n, dtype=np.float32) < eps + slack
        vals = base ^ flips.astype(np.uint8)
        f = SequenceFunction(vals)
        if gt.distance_to_sortedness(f) >= eps and f.r == 2:
            f.meta = {"kind": "far_sorted", "tries": tries}
            return f
    raise RuntimeError(f"no {eps}-far sequence in {max_tries} tries")


# -------------------------------------------------------------------- specs

@dataclass(frozen=True)
class InputSpec:
    """A reproducible recipe for one input instance."""

    kind: str
    params: dict = field(default_factory=dict)
    seed: int | None = None

    def build(self):
        return make_input(self)


_KINDS: dict[str, tuple[Callable[..., Any], str]] = {
    "linear": (lambda p, s: random_linear(int(p["d"]), s), MEMBER),
    "quadratic": (lambda p, s: random_quadratic(int(p["d"]), s), MEMBER),
    "far": (lambda p, s: random_far_function(int(p["d"]), float(p.get("far_eps", p.get("eps", 0.25))), s), FAR),
    "uniform": (lambda p, s: uniform_function(int(p["d"]), s), UNKNOWN),
    "far_cubic": (lambda p, s: far_cubic(int(p["d"])), FAR),
    "sort_dplus": (lambda p, s: sortedness_dplus(int(p["n"]), s), MEMBER),
    "sort_dminus": (lambda p, s: sortedness_dminus(int(p["n"]), s), UNKNOWN),
    "lip_line_dplus": (lambda p, s: lipschitz_line_dplus(int(p["n"]), s), MEMBER),
    "lip_line_dminus": (lambda p, s: lipschitz_line_dminus(int(p["n"]), s), UNKNOWN),
    "lip_cube_dplus": (lambda p, s: lipschitz_cube_dplus(int(p["d"]), s), MEMBER),
    "lip_cube_dminus": (lambda p, s: lipschitz_cube_dminus(int(p["d"]), s), UNKNOWN),
    "sorted": (lambda p, s: sorted_sequence(int(p["n"]), int(p.get("r", 2)), s), MEMBER),
    "far_sorted": (lambda p, s: far_boolean_sequence(int(p["n"]), float(p.get("far_eps", p.get("eps", 0.25))), s), FAR),
}

KINDS = tuple(_KINDS)


def make_input(spec: InputSpec):
    if spec.kind == "file":
        from .core import load_function
        return load_function(spec.params["path"])
    if spec.kind not in _KINDS:
        raise KeyError(f"unknown input kind {spec.kind!r}; known: {sorted(_KINDS)}")
    return _KINDS[spec.kind][0](spec.params, spec.seed)


def label_of(kind: str) -> str:
    """MEMBER, FAR or UNKNOWN for an input kind."""
    if kind == "file":
        return UNKNOWN
    return _KINDS[kind][1]
