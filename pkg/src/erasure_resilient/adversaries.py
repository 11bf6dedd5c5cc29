"""Adversary strategies.

A strategy is called once after every answered query with an
``AdversaryView`` and returns at most t targets. A target is a point, or a
``(point, value)`` pair in corruption mode. Bare points in corruption mode
get the session's default corruption (a flipped value).
"""

from __future__ import annotations

from typing import Any

from .core import ERASED, BooleanFunction, SequenceFunction, comb


class Strategy:
    """Base class. Subclasses override ``act`` and optionally ``reset``."""

    name = "strategy"
    passive = False

    def __init__(self, t: int | None = None):
        self.t = t

    def budget(self, view) -> int:
        return view.t if self.t is None else min(self.t, view.t)

    def reset(self, view) -> None:
        pass

    def act(self, view) -> list:
        return []

    def __repr__(self) -> str:
        return f"{type(self).__name__}(t={self.t})"


class NullStrategy(Strategy):
    """Never manipulates anything."""

    name = "null"
    passive = True


def _domain(f) -> tuple[int, int]:
    if isinstance(f, SequenceFunction):
        return 1, f.n + 1
    return 0, f.size


class RandomEraser(Strategy):
    """Targets t uniformly random points not manipulated yet."""

    name = "random_eraser"

    def reset(self, view) -> None:
        self._lo, self._hi = _domain(view.f)

    def act(self, view) -> list:
        lo, hi = self._lo, self._hi
        overlay = view.overlay
        free = (hi - lo) - len(overlay)
        want = min(self.budget(view), free)
        if want <= 0:
            return []
        rng = view.rng
        if 4 * free < hi - lo:
            pool = [x for x in range(lo, hi) if x not in overlay]
            return rng.sample(pool, want)
        out: list[int] = []
        chosen = set()
        while len(out) < want:
            x = rng.randrange(lo, hi)
            if x not in overlay and x not in chosen:
                chosen.add(x)
                out.append(x)
        return out


class SpanEraser(Strategy):
    """Targets XORs of subsets of the queried points.

    Subsets of size at least two are visited by size, then lexicographically
    by sorted query positions. Subsets whose XOR is already manipulated are
    passed over without spending budget. With at most log2(t) queries every
    such XOR is manipulated before the next query.

    ``scan_limit`` caps how many subsets one step may pass over; the walk
    resumes where it stopped on the next step. Without it a nearly saturated
    small domain would make each step enumerate an exponential number of
    subsets.
    """

    name = "span_eraser"

    def __init__(self, t: int | None = None, scan_limit: int = 10_000):
        super().__init__(t)
        self.scan_limit = scan_limit

    def reset(self, view) -> None:
        if isinstance(view.f, SequenceFunction):
            raise TypeError("span_eraser needs a Boolean-cube domain")
        self._xs: list[int] = []
        self._done: dict[tuple, int] = {}
        self._next: dict[tuple, dict[int, int]] = {}
        self._size_done: dict[int, int] = {}

    def _find(self, key, e: int) -> int:
        nxt = self._next.get(key)
        if nxt is None:
            return e
        root = e
        while root in nxt:
            root = nxt[root]
        while e in nxt and nxt[e] != root:
            nxt[e], e = root, nxt[e]
        return root

    def _descend(self, prefix: tuple, s: int, k: int):
        r = len(prefix)
        start = prefix[-1] + 1 if prefix else 0
        if r == s - 1:
            e = self._find((s, prefix), start)
            return prefix + (e,) if e < k else None
        done = self._done
        for a in range(start, k - (s - r) + 1):
            p = prefix + (a,)
            if done.get((s, p), 0) >= comb(k - a - 1, s - r - 1):
                continue
            res = self._descend(p, s, k)
            if res is not None:
                return res
        return None

    def _mark(self, tup: tuple) -> None:
        s = len(tup)
        done = self._done
        for i in range(1, s):
            key = (s, tup[:i])
            done[key] = done.get(key, 0) + 1
        self._next.setdefault((s, tup[:-1]), {})[tup[-1]] = tup[-1] + 1
        self._size_done[s] = self._size_done.get(s, 0) + 1

    def next_subset(self):
        """Next unvisited subset (as sorted query positions), or None."""
        k = len(self._xs)
        for s in range(2, k + 1):
            if self._size_done.get(s, 0) >= comb(k, s):
                continue
            tup = self._descend((), s, k)
            if tup is not None:
                return tup
        return None

    def act(self, view) -> list:
        entries = view.transcript.entries
        xs = self._xs
        while len(xs) < len(entries):
            xs.append(entries[len(xs)][0])
        budget = self.budget(view)
        overlay = view.overlay
        lo, hi = _domain(view.f)
        if len(overlay) >= hi - lo:
            return []
        out: list[int] = []
        chosen = set()
        scanned = 0
        while len(out) < budget and scanned < self.scan_limit:
            tup = self.next_subset()
            if tup is None:
                break
            scanned += 1
            self._mark(tup)
            y = 0
            for i in tup:
                y ^= xs[i]
            if y in overlay or y in chosen:
                continue
            chosen.add(y)
            out.append(y)
        return out


class PairEraser(Strategy):
    """On [n]: after index i is queried, targets its block partner.

    Blocks are {2j-1, 2j}.
    """

    name = "pair_eraser"

    def reset(self, view) -> None:
        if not isinstance(view.f, SequenceFunction):
            raise TypeError("pair_eraser needs a sequence domain")
        self._n = view.f.n

    def act(self, view) -> list:
        if self.budget(view) < 1:
            return []
        i = view.transcript.entries[-1][0]
        j = i + 1 if i % 2 == 1 else i - 1
        if 1 <= j <= self._n and j not in view.overlay:
            return [j]
        return []


class CubePairEraser(Strategy):
    """On {0,1}^d: after x is queried, targets x XOR e_1."""

    name = "cube_pair_eraser"

    def reset(self, view) -> None:
        if isinstance(view.f, SequenceFunction):
            raise TypeError("cube_pair_eraser needs a Boolean-cube domain")

    def act(self, view) -> list:
        if self.budget(view) < 1:
            return []
        y = view.transcript.entries[-1][0] ^ 1
        return [] if y in view.overlay else [y]


class SumSpoiler(Strategy):
    """Targets XORs of the newest point with recent ones, pairs before triples."""

    name = "sum_spoiler"

    def __init__(self, t: int | None = None, window: int = 8):
        super().__init__(t)
        self.window = window

    def reset(self, view) -> None:
        if isinstance(view.f, SequenceFunction):
            raise TypeError("sum_spoiler needs a Boolean-cube domain")

    def _candidates(self, entries):
        k = len(entries)
        x = entries[-1][0]
        lo = max(0, k - 1 - self.window)
        for j in range(k - 2, lo - 1, -1):
            yield x ^ entries[j][0]
        for j in range(k - 2, lo - 1, -1):
            xj = x ^ entries[j][0]
            for i in range(j - 1, lo - 1, -1):
                yield xj ^ entries[i][0]

    def act(self, view) -> list:
        budget = self.budget(view)
        overlay = view.overlay
        out: list[int] = []
        for y in self._candidates(view.transcript.entries):
            if len(out) >= budget:
                break
            if y not in overlay and y not in out:
                out.append(y)
        return out


class PairCorruptor(Strategy):
    """Corruption mode: rewrites sums of the newest point with recent ones.

    The written value is the XOR of the two observed values, so the pair
    looks consistent with some linear function.
    """

    name = "pair_corruptor"

    def __init__(self, t: int | None = None, window: int = 8):
        super().__init__(t)
        self.window = window

    def reset(self, view) -> None:
        if not isinstance(view.f, BooleanFunction):
            raise TypeError("pair_corruptor needs a Boolean-cube domain")
        self._lookup = view.f.fast_lookup()

    def act(self, view) -> list:
        entries = view.transcript.entries
        x, vx = entries[-1]
        if vx is ERASED:
            return []
        budget = self.budget(view)
        overlay = view.overlay
        out: list[tuple[int, int]] = []
        seen = set()
        for j in range(len(entries) - 2, max(-1, len(entries) - 2 - self.window), -1):
            if len(out) >= budget:
                break
            y, vy = entries[j]
            if vy is ERASED:
                continue
            z = x ^ y
            want = vx ^ vy
            cur = overlay.get(z)
            if cur is None:
                cur = self._lookup(z)
            if cur != want and z not in seen:
                seen.add(z)
                out.append((z, want))
        return out


class RecordingStrategy(Strategy):
    """Wraps a strategy and keeps a copy of every transcript it was shown."""

    name = "recording"

    def __init__(self, inner: Strategy):
        super().__init__(inner.t)
        self.inner = inner
        self.passive = False
        self.seen: list[list] = []

    def reset(self, view) -> None:
        self.inner.reset(view)

    def act(self, view) -> list:
        self.seen.append(list(view.transcript.entries))
        return self.inner.act(view)


STRATEGIES = {
    cls.name: cls
    for cls in (NullStrategy, RandomEraser, SpanEraser, PairEraser, CubePairEraser,
                SumSpoiler, PairCorruptor)
}


def make_strategy(spec: Any, t: int | None = None) -> Strategy:
    """Build a strategy from a name, a dict like ``{"strategy": name, "t": 8}``
    or a config string like ``strategy = "span_eraser", t = 8``."""
    if isinstance(spec, Strategy):
        return spec
    params: dict[str, Any] = {}
    if isinstance(spec, dict):
        params = dict(spec)
        name = params.pop("strategy", None) or params.pop("name")
    elif "=" in str(spec):
        params = _parse_inline(str(spec))
        name = params.pop("strategy")
    else:
        name = str(spec)
    if name not in STRATEGIES:
        raise KeyError(f"unknown strategy {name!r}; known: {sorted(STRATEGIES)}")
    cls = STRATEGIES[name]
    if "t" not in params and t is not None:
        params["t"] = t
    if cls is NullStrategy:
        return cls()
    params = {k: int(v) for k, v in params.items()}
    return cls(**params)


def _parse_inline(text: str) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for part in text.split(","):
        if not part.strip():
            continue
        key, _, val = part.partition("=")
        out[key.strip()] = val.strip().strip("\"'")
    return out
