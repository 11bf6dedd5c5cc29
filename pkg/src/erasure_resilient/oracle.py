"""Online-manipulation oracles.

An ``OracleSession`` answers queries to a fixed function through an overlay
that an adversary strategy edits after every answered query. In erasure mode
the adversary writes ``ERASED``; in corruption mode it writes values.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Any, Sequence

from .core import (ERASED, BooleanFunction, DomainError, Function, Point, QueryAnswer,
                   SequenceFunction, Transcript)


class OracleMode(enum.Enum):
    ERASURE = "erasure"
    CORRUPTION = "corruption"

    @classmethod
    def parse(cls, value) -> "OracleMode":
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


class BudgetExceeded(RuntimeError):
    """A strategy tried to manipulate more than t points in one step."""


class AdversaryError(ValueError):
    """A strategy emitted an ill-formed target."""


@dataclass
class Witness:
    """Queried points and their observed values that certify a violation.

    ``support`` indexes the points taking part in the violated relation.
    """

    points: list
    values: list
    property_id: str
    support: tuple = ()

    def to_dict(self) -> dict:
        return {"points": [int(p) for p in self.points], "values": [int(v) for v in self.values],
                "property": self.property_id, "support": list(self.support)}


class AdversaryView:
    """Everything a strategy may look at.

    The transcript holds only queries answered so far, so it always ends at
    the query that triggered the call. Tester randomness is not reachable.
    """

    __slots__ = ("f", "t", "mode", "rng", "transcript", "overlay", "_session")

    def __init__(self, session: "OracleSession", rng: random.Random):
        self.f = session.f
        self.t = session.t
        self.mode = session.mode
        self.rng = rng
        self.transcript = session.transcript
        self.overlay = MappingProxyType(session._overlay)
        self._session = session

    @property
    def tester_tag(self) -> str | None:
        return self._session.tester_tag

    @property
    def last(self):
        """The just-answered (point, answer) pair."""
        return self.transcript.entries[-1]

    @property
    def query_count(self) -> int:
        return len(self.transcript.entries)


class OracleSession:
    """One tester run against one function with one adversary."""

    def __init__(self, f: Function, t: int, mode: OracleMode | str, strategy=None, seed=None):
        if t < 0:
            raise ValueError("budget t must be non-negative")
        self.f = f
        self.t = int(t)
        self.mode = OracleMode.parse(mode)
        self.transcript = Transcript()
        self._overlay: dict[int, QueryAnswer] = {}
        self.tester_tag: str | None = None
        self.manipulations = 0
        self._is_seq = isinstance(f, SequenceFunction)
        self._lo = 1 if self._is_seq else 0
        self._hi = f.n + 1 if self._is_seq else f.size
        self._lookup = f.fast_lookup()
        self._rng = random.Random(seed)
        self.view = AdversaryView(self, self._rng)
        from .adversaries import NullStrategy, make_strategy
        if strategy is None:
            strategy = NullStrategy()
        elif isinstance(strategy, (str, dict)):
            strategy = make_strategy(strategy, t=self.t)
        self.strategy = strategy
        self._passive = self.t == 0 or getattr(strategy, "passive", False)
        strategy.reset(self.view)

    @property
    def overlay(self):
        return MappingProxyType(self._overlay)

    def announce(self, tag: str) -> None:
        """Record which tester is running. Strategies may read it."""
        self.tester_tag = tag

    def in_domain(self, x: int) -> bool:
        return self._lo <= x < self._hi

    def query(self, x) -> QueryAnswer:
        """Answer a query, then let the adversary act."""
        if x.__class__ is not int:
            x = self._coerce(x)
        if not self._lo <= x < self._hi:
            raise DomainError(f"query {x} outside the domain")
        ans = self._overlay.get(x)
        if ans is None:
            ans = self._lookup(x)
        self.transcript.entries.append((x, ans))
        if not self._passive:
            self._apply(self.strategy.act(self.view))
        return ans

    def _coerce(self, x) -> int:
        if isinstance(x, Point):
            if self._is_seq or x.d != self.f.d:
                raise DomainError("point dimension does not match the function")
            return x.bits
        return int(x)

    def _apply(self, action: Sequence[Any] | None) -> None:
        if not action:
            return
        if len(action) > self.t:
            raise BudgetExceeded(f"strategy {self.strategy!r} emitted {len(action)} targets, budget {self.t}")
        corrupt = self.mode is OracleMode.CORRUPTION
        for item in action:
            if isinstance(item, tuple):
                x, val = item
            else:
                x, val = item, None
            x = int(x)
            if not self._lo <= x < self._hi:
                raise AdversaryError(f"target {x} outside the domain")
            if corrupt:
                if val is None or val is ERASED:
                    val = self.default_corruption(x)
                self._check_value(val)
                self._overlay[x] = int(val)
            else:
                self._overlay[x] = ERASED
            self.manipulations += 1

    def default_corruption(self, x: int) -> int:
        """The value written when a strategy targets x without giving one."""
        cur = self._overlay.get(x)
        if cur is None:
            cur = self._lookup(x)
        f = self.f
        if isinstance(f, BooleanFunction):
            return (cur + 1) % f.range_size
        return cur + 1

    def _check_value(self, val) -> None:
        f = self.f
        if isinstance(f, BooleanFunction) and not 0 <= int(val) < f.range_size:
            raise AdversaryError(f"corruption value {val} outside the range")

    def peek(self, x: int) -> QueryAnswer:
        """Current answer at x without recording a query or triggering the adversary.

        For white-box test assertions; testers never call it.
        """
        if not self.in_domain(x):
            raise DomainError(f"point {x} outside the domain")
        ans = self._overlay.get(x)
        return self._lookup(x) if ans is None else ans

    @property
    def query_count(self) -> int:
        return len(self.transcript.entries)

    @property
    def saw_erasure(self) -> bool:
        return any(a is ERASED for _, a in self.transcript.entries)


def open_session(f: Function, t: int, mode: OracleMode | str = OracleMode.ERASURE,
                 strategy=None, seed=None) -> OracleSession:
    return OracleSession(f, t, mode, strategy, seed)


def inspect(session: OracleSession) -> tuple[Transcript, dict]:
    """Copies of the transcript and overlay, for test assertions only."""
    return Transcript(list(session.transcript.entries)), dict(session._overlay)
