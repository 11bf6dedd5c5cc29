"""Domain types: points, answers, Boolean/sequence functions, transcripts and file IO."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Callable, Iterable, Sequence, Union

import numpy as np

MAX_DIM = 30


class DimensionError(ValueError):
    """Points or functions of mismatched dimension were combined."""


class DomainError(ValueError):
    """A query or target lies outside the function's domain."""


class FormatError(ValueError):
    """A file does not follow the expected text format."""


class _Erased:
    """The erased symbol. There is exactly one instance, ``ERASED``."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "ERASED"

    def __str__(self) -> str:
        return "BOT"

    def __reduce__(self):
        return (_Erased, ())

    def __bool__(self) -> bool:
        raise TypeError("ERASED has no truth value; compare with `is ERASED`")


ERASED = _Erased()
QueryAnswer = Union[int, _Erased]


def is_erased(answer: QueryAnswer) -> bool:
    return answer is ERASED


def format_answer(answer: QueryAnswer) -> str:
    return "BOT" if answer is ERASED else str(int(answer))


def parse_answer(text: str) -> QueryAnswer:
    text = text.strip()
    if text == "BOT":
        return ERASED
    try:
        return int(text)
    except ValueError as exc:
        raise FormatError(f"bad answer token {text!r}") from exc


def check_dim(d: int) -> int:
    if not isinstance(d, (int, np.integer)) or not 1 <= d <= MAX_DIM:
        raise DimensionError(f"dimension must be an integer in [1, {MAX_DIM}], got {d!r}")
    return int(d)


@dataclass(frozen=True, slots=True)
class Point:
    """A vector in {0,1}^d packed into an int.

    Coordinate x[1] is the least significant bit of ``bits``.
    """

    bits: int
    d: int

    def __post_init__(self):
        check_dim(self.d)
        if not 0 <= self.bits < (1 << self.d):
            raise DomainError(f"bits {self.bits} out of range for d={self.d}")

    def coord(self, i: int) -> int:
        """1-indexed coordinate."""
        if not 1 <= i <= self.d:
            raise DomainError(f"coordinate {i} out of range for d={self.d}")
        return (self.bits >> (i - 1)) & 1

    def __xor__(self, other: "Point") -> "Point":
        if not isinstance(other, Point):
            return NotImplemented
        if other.d != self.d:
            raise DimensionError(f"cannot add points of dimension {self.d} and {other.d}")
        return Point(self.bits ^ other.bits, self.d)

    @classmethod
    def from_coords(cls, coords: Sequence[int]) -> "Point":
        bits = 0
        for i, c in enumerate(coords):
            if c not in (0, 1):
                raise DomainError("coordinates must be 0 or 1")
            bits |= int(c) << i
        return cls(bits, len(coords))


def xor_sum(points: Iterable[Point], d: int | None = None) -> Point:
    """Sum of points over GF(2). The empty sum needs an explicit ``d``."""
    acc = None
    for p in points:
        acc = p if acc is None else acc ^ p
    if acc is None:
        if d is None:
            raise DimensionError("empty sum needs an explicit dimension")
        return Point(0, check_dim(d))
    if d is not None and acc.d != d:
        raise DimensionError(f"points have dimension {acc.d}, expected {d}")
    return acc


class BooleanFunction:
    """A function on {0,1}^d with values in {0, ..., range_size - 1}.

    Either a full table (index = packed bits) or a seeded rule evaluated on
    demand. A rule may come with ``vector_rule``, a numpy version used when
    the full table is needed. ``range_size`` is 2 for Boolean functions and 3
    for the small integer-valued functions used by the Lipschitz constructions.
    """

    __slots__ = ("d", "range_size", "meta", "_table", "_bytes", "_rule", "_vector_rule")

    def __init__(self, d: int, table=None, *, rule: Callable[[int], int] | None = None,
                 vector_rule: Callable[[np.ndarray], np.ndarray] | None = None,
                 range_size: int = 2, meta: dict | None = None):
        self.d = check_dim(d)
        self.meta = dict(meta or {})
        self._vector_rule = vector_rule
        if range_size not in (2, 3):
            raise ValueError("range_size must be 2 or 3")
        self.range_size = range_size
        if (table is None) == (rule is None):
            raise ValueError("give exactly one of table or rule")
        self._rule = rule
        self._table = None
        self._bytes = None
        if table is not None:
            arr = np.ascontiguousarray(np.asarray(table, dtype=np.uint8))
            if arr.shape != (1 << self.d,):
                raise DimensionError(f"table has shape {arr.shape}, expected ({1 << self.d},)")
            if arr.size and int(arr.max()) >= range_size:
                raise ValueError(f"table values must lie in [0, {range_size})")
            arr.setflags(write=False)
            self._table = arr
            self._bytes = arr.tobytes()

    @property
    def size(self) -> int:
        return 1 << self.d

    @property
    def is_materialized(self) -> bool:
        return self._table is not None

    @property
    def table(self) -> np.ndarray:
        if self._table is None:
            if self._vector_rule is not None:
                idx = np.arange(self.size, dtype=np.int64)
                arr = np.ascontiguousarray(self._vector_rule(idx), dtype=np.uint8)
            else:
                rule = self._rule
                arr = np.fromiter((rule(x) for x in range(self.size)), dtype=np.uint8,
                                  count=self.size)
            arr.setflags(write=False)
            self._table = arr
            self._bytes = arr.tobytes()
        return self._table

    def value(self, x: int) -> int:
        """Value at packed bits ``x`` (no bounds check beyond the table's)."""
        if self._bytes is not None:
            return self._bytes[x]
        return self._rule(x)

    def fast_lookup(self) -> Callable[[int], int]:
        """The cheapest callable mapping packed bits to a value."""
        if self._bytes is not None:
            return self._bytes.__getitem__
        return self._rule

    def __call__(self, x) -> int:
        return eval_point(self, x)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BooleanFunction):
            return NotImplemented
        return (self.d == other.d and self.range_size == other.range_size
                and np.array_equal(self.table, other.table))

    __hash__ = None

    def __repr__(self) -> str:
        kind = "table" if self._table is not None else "rule"
        return f"BooleanFunction(d={self.d}, range_size={self.range_size}, {kind})"


def eval_point(f: BooleanFunction, x) -> int:
    """f(x) for a Point or packed int, with dimension and range checks."""
    if isinstance(x, Point):
        if x.d != f.d:
            raise DimensionError(f"point has dimension {x.d}, function has {f.d}")
        x = x.bits
    x = int(x)
    if not 0 <= x < f.size:
        raise DomainError(f"point {x} outside domain of size {f.size}")
    return f.value(x)


class SequenceFunction:
    """A function on [n] = {1, ..., n} with non-negative integer values.

    Backed by a value array (position i at index i-1) or a rule i -> value.
    Rule-backed sequences must state their number of distinct values ``r``.
    """

    __slots__ = ("n", "meta", "_values", "_lookup", "_rule", "_r", "__dict__")

    def __init__(self, values=None, *, n: int | None = None,
                 rule: Callable[[int], int] | None = None, r: int | None = None,
                 meta: dict | None = None):
        if (values is None) == (rule is None):
            raise ValueError("give exactly one of values or rule")
        self.meta = dict(meta or {})
        self._rule = rule
        self._values = None
        self._lookup = None
        self._r = r
        if values is not None:
            arr = np.asarray(values)
            if arr.ndim != 1:
                raise ValueError("values must be one-dimensional")
            if arr.size and not np.issubdtype(arr.dtype, np.integer):
                raise ValueError("sequence values must be integers")
            if arr.size and int(arr.min()) < 0:
                raise ValueError("sequence values must be non-negative")
            if arr.dtype != np.uint8:
                arr = arr.astype(np.int64)
            arr = np.ascontiguousarray(arr)
            arr.setflags(write=False)
            self._values = arr
            self.n = int(arr.size)
        else:
            if n is None or r is None:
                raise ValueError("rule-backed sequences need n and r")
            self.n = int(n)
        if self.n < 1:
            raise ValueError("sequence must have n >= 1")

    @property
    def values(self) -> np.ndarray:
        if self._values is None:
            rule = self._rule
            arr = np.fromiter((rule(i) for i in range(1, self.n + 1)), dtype=np.int64, count=self.n)
            arr.setflags(write=False)
            self._values = arr
        return self._values

    @cached_property
    def r(self) -> int:
        """Number of distinct values (the image size)."""
        if self._r is not None:
            return self._r
        v = self.values
        if int(v.max()) < 1 << 24:
            return int(np.count_nonzero(np.bincount(v)))
        return int(np.unique(v).size)

    @property
    def size(self) -> int:
        return self.n

    def fast_lookup(self) -> Callable[[int], int]:
        """A callable i -> value for 1-indexed i (no bounds check)."""
        if self._lookup is None:
            if self._values is None:
                self._lookup = self._rule
            elif self._values.dtype == np.uint8:
                # one padding byte makes position i sit at offset i
                self._lookup = (b"\x00" + self._values.tobytes()).__getitem__
            else:
                vals = [0] + self._values.tolist()
                self._lookup = vals.__getitem__
        return self._lookup

    def value(self, i: int) -> int:
        return self.fast_lookup()(i)

    def __call__(self, i: int) -> int:
        i = int(i)
        if not 1 <= i <= self.n:
            raise DomainError(f"index {i} outside [1, {self.n}]")
        return self.value(i)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SequenceFunction):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.values, other.values)

    __hash__ = None

    def __repr__(self) -> str:
        return f"SequenceFunction(n={self.n})"


Function = Union[BooleanFunction, SequenceFunction]


def domain_contains(f: Function, x: int) -> bool:
    if isinstance(f, SequenceFunction):
        return 1 <= x <= f.n
    return 0 <= x < f.size


@dataclass
class Transcript:
    """The ordered (point, answer) pairs a tester has seen."""

    entries: list = field(default_factory=list)

    def append(self, point: int, answer: QueryAnswer) -> None:
        self.entries.append((point, answer))

    @property
    def query_count(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    @property
    def points(self) -> list[int]:
        return [p for p, _ in self.entries]

    @property
    def answers(self) -> list[QueryAnswer]:
        return [a for _, a in self.entries]

    @property
    def erasure_count(self) -> int:
        return sum(1 for _, a in self.entries if a is ERASED)

    def dumps(self, hex_points: bool = True) -> str:
        """One line per query: ``<point> <value|BOT>``.

        Cube points are written as hex bits, sequence indices in decimal.
        """
        fmt = (lambda p: format(p, "x")) if hex_points else str
        return "".join(f"{fmt(p)} {format_answer(a)}\n" for p, a in self.entries)

    @classmethod
    def loads(cls, text: str, hex_points: bool = True) -> "Transcript":
        base = 16 if hex_points else 10
        entries = []
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 2:
                raise FormatError(f"line {lineno}: expected '<point> <answer>'")
            try:
                p = int(parts[0], base)
            except ValueError as exc:
                raise FormatError(f"line {lineno}: bad point {parts[0]!r}") from exc
            entries.append((p, parse_answer(parts[1])))
        return cls(entries)


# ---------------------------------------------------------------- file formats

def dumps_function(f: Function) -> str:
    if isinstance(f, SequenceFunction):
        return f"seq n={f.n}\n" + " ".join(map(str, f.values.tolist())) + "\n"
    head = "bool" if f.range_size == 2 else "ter"
    body = (f.table + ord("0")).tobytes().decode("ascii")
    return f"{head} d={f.d}\n{body}\n"


def loads_function(text: str) -> Function:
    header, _, body = text.lstrip().partition("\n")
    parts = header.split()
    if len(parts) != 2 or "=" not in parts[1]:
        raise FormatError(f"bad header {header!r}")
    kind, (key, _, val) = parts[0], parts[1].partition("=")
    try:
        num = int(val)
    except ValueError as exc:
        raise FormatError(f"bad header value {val!r}") from exc
    if kind in ("bool", "ter"):
        if key != "d":
            raise FormatError("table header needs d=<d>")
        digits = "".join(body.split())
        allowed = "01" if kind == "bool" else "012"
        if num > MAX_DIM or len(digits) != 1 << num:
            raise FormatError(f"expected {1 << min(num, MAX_DIM)} digits, got {len(digits)}")
        if digits.strip(allowed):
            raise FormatError(f"table digits must be drawn from {allowed!r}")
        arr = np.frombuffer(digits.encode("ascii"), dtype=np.uint8) - ord("0")
        return BooleanFunction(num, arr, range_size=2 if kind == "bool" else 3)
    if kind == "seq":
        if key != "n":
            raise FormatError("sequence header needs n=<n>")
        try:
            vals = [int(tok) for tok in body.split()]
        except ValueError as exc:
            raise FormatError("sequence values must be integers") from exc
        if len(vals) != num:
            raise FormatError(f"expected {num} values, got {len(vals)}")
        return SequenceFunction(np.array(vals, dtype=np.int64))
    raise FormatError(f"unknown function kind {kind!r}")


def save_function(f: Function, path) -> None:
    Path(path).write_text(dumps_function(f))


def load_function(path) -> Function:
    return loads_function(Path(path).read_text())


def parity_table(d: int) -> np.ndarray:
    """popcount(x) mod 2 for every x in [0, 2^d)."""
    x = np.arange(1 << check_dim(d), dtype=np.uint32)
    return (np.bitwise_count(x) & 1).astype(np.uint8)


def comb(n: int, k: int) -> int:
    return math.comb(n, k) if 0 <= k <= n else 0
