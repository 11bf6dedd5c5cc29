"""Testers that run against an ``OracleSession``.

Every tester is nonadaptive and 1-sided: query points depend only on the
tester's own seed, and a Reject always carries a witness made of obtained
(non-erased) values.
"""

from __future__ import annotations

import enum
import itertools
import math
import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .core import ERASED, BooleanFunction, SequenceFunction
from .oracle import OracleMode, OracleSession, Witness

DEFAULT_C0 = 2.0 ** -6
SORTEDNESS_C = 32


class Decision(enum.Enum):
    ACCEPT = "accept"
    REJECT = "reject"


@dataclass
class Verdict:
    decision: Decision
    witness: Witness | None
    queries_used: int
    saw_erasure: bool
    info: dict[str, Any] = field(default_factory=dict)

    @property
    def rejected(self) -> bool:
        return self.decision is Decision.REJECT


class RegimeWarning(UserWarning):
    """Parameters fall outside a tester's proven validity range."""


def _finish(session: OracleSession, start: int, witness: Witness | None, **info) -> Verdict:
    entries = session.transcript.entries
    saw = any(a is ERASED for _, a in entries[start:])
    decision = Decision.REJECT if witness is not None else Decision.ACCEPT
    return Verdict(decision, witness, len(entries) - start, saw, info)


def _need_cube(session: OracleSession) -> int:
    if not isinstance(session.f, BooleanFunction):
        raise TypeError("this tester needs a function on the Boolean cube")
    return session.f.d


def _check_eps(eps: float, upper: float = 0.5) -> None:
    if not 0 < eps < upper:
        raise ValueError(f"epsilon must lie in (0, {upper})")


def _regime(ok: bool, name: str, detail: str) -> bool:
    if not ok:
        warnings.warn(f"{name}: {detail}", RegimeWarning, stacklevel=3)
    return ok


# ------------------------------------------------------------------ linearity

def blr_test(session: OracleSession, eps: float, reps: int | None = None, seed=None) -> Verdict:
    """Three-point test on (x, y, x+y), repeated ``reps`` times."""
    d = _need_cube(session)
    if reps is None:
        reps = math.ceil(2 / eps)
    session.announce("blr")
    rng = random.Random(seed)
    bits = rng.getrandbits
    query = session.query
    start = session.query_count
    for _ in range(reps):
        x, y = bits(d), bits(d)
        a, b, c = query(x), query(y), query(x ^ y)
        if a is not ERASED and b is not ERASED and c is not ERASED and a ^ b != c:
            w = Witness([x, y, x ^ y], [a, b, c], "linearity", (0, 1, 2))
            return _finish(session, start, w, reps=reps)
    return _finish(session, start, None, reps=reps)


def even_subset(rng: random.Random, q: int) -> int:
    """Uniform nonempty even-size subset of [q] as a bitmask.

    A uniform subset of the first q-1 elements is completed with element q
    when its size is odd; the empty outcome is redrawn.
    """
    while True:
        m = rng.getrandbits(q - 1)
        if m.bit_count() & 1:
            m |= 1 << (q - 1)
        if m:
            return m


def reserve_size_online(eps: float, t: int) -> int:
    return math.ceil(2 * math.log2(50 * max(t, 1) / eps))


def reserve_size_corruption(eps: float, t: int) -> int:
    return math.ceil(2 * math.log2(3000 * max(t, 1) / eps ** 2))


def linearity_schedule(eps: float) -> list[tuple[int, int, int]]:
    """(j, rounds, sum checks per round) for the work-investment loop."""
    out = []
    for j in range(1, math.ceil(math.log2(8 / eps)) + 1):
        out.append((j, math.ceil(8 * math.log(5) / (2 ** j * eps)), 4 * 2 ** j))
    return out


def _linearity_reserve_test(session, eps, q, rng, tag, **info) -> Verdict:
    d = _need_cube(session)
    session.announce(tag)
    bits = rng.getrandbits
    query = session.query
    start = session.query_count
    for j, rounds, checks in linearity_schedule(eps):
        for _ in range(rounds):
            xs = [bits(d) for _ in range(q)]
            vs = [query(x) for x in xs]
            for _ in range(checks):
                m = even_subset(rng, q)
                s = 0
                par = 0
                ok = True
                rest = m
                while rest:
                    low = rest & -rest
                    i = low.bit_length() - 1
                    rest ^= low
                    s ^= xs[i]
                    v = vs[i]
                    if v is ERASED:
                        ok = False
                    else:
                        par ^= v
                a = query(s)
                if ok and a is not ERASED and a != par:
                    keep = [i for i in range(q) if vs[i] is not ERASED]
                    pos = {i: k for k, i in enumerate(keep)}
                    members = [i for i in range(q) if m >> i & 1]
                    w = Witness([xs[i] for i in keep] + [s], [vs[i] for i in keep] + [a],
                                "linearity", tuple(pos[i] for i in members) + (len(keep),))
                    return _finish(session, start, w, q=q, **info)
    return _finish(session, start, None, q=q, **info)


def linearity_online_test(session: OracleSession, eps: float, t: int | None = None, seed=None,
                          c0: float = DEFAULT_C0, q: int | None = None) -> Verdict:
    """Online-erasure-resilient linearity tester (reserve plus even-size sums)."""
    _check_eps(eps)
    t = session.t if t is None else t
    d = _need_cube(session)
    q = reserve_size_online(eps, t) if q is None else q
    ok = _regime(t <= c0 * eps ** 1.25 * 2 ** (d / 4), "linearity_online",
                 f"t={t} exceeds c0*eps^(5/4)*2^(d/4)")
    return _linearity_reserve_test(session, eps, q, random.Random(seed), "linearity_online",
                                   regime_ok=ok)


def linearity_corruption_test(session: OracleSession, eps: float, t: int | None = None,
                              seed=None) -> Verdict:
    """The same tester with the reserve enlarged for the corruption model."""
    _check_eps(eps)
    if session.mode is not OracleMode.CORRUPTION:
        raise ValueError("linearity_corruption_test needs a corruption-mode session")
    t = session.t if t is None else t
    q = reserve_size_corruption(eps, t)
    return _linearity_reserve_test(session, eps, q, random.Random(seed), "linearity_corruption")


def linearity_online_query_bound(eps: float, t: int) -> float:
    return 40 * reserve_size_online(eps, t) / eps


def linearity_simple_test(session: OracleSession, eps: float, t: int | None = None, seed=None,
                          c0: float = DEFAULT_C0, c: int = 88) -> Verdict:
    """Reserve of ceil(c t / eps) points, then ceil(24 / eps) pair sums."""
    _check_eps(eps)
    d = _need_cube(session)
    t = session.t if t is None else t
    q = math.ceil(c * max(t, 1) / eps)
    ok = _regime(t <= c0 * eps * 2 ** (d / 4), "linearity_simple",
                 f"t={t} exceeds c0*eps*2^(d/4)")
    session.announce("linearity_simple")
    rng = random.Random(seed)
    bits = rng.getrandbits
    query = session.query
    start = session.query_count
    xs = [bits(d) for _ in range(q)]
    vs = [query(x) for x in xs]
    for _ in range(math.ceil(24 / eps)):
        i = rng.randrange(q)
        j = rng.randrange(q - 1)
        if j >= i:
            j += 1
        if i > j:
            i, j = j, i
        s = xs[i] ^ xs[j]
        a = query(s)
        vi, vj = vs[i], vs[j]
        if a is not ERASED and vi is not ERASED and vj is not ERASED and vi ^ vj != a:
            w = Witness([xs[i], xs[j], s], [vi, vj, a], "linearity", (0, 1, 2))
            return _finish(session, start, w, q=q, regime_ok=ok)
    return _finish(session, start, None, q=q, regime_ok=ok)


# --------------------------------------------------------------- quadraticity

def _seven(f_vals) -> int:
    acc = 0
    for v in f_vals:
        acc ^= v
    return acc


def akklr_reps(eps: float) -> int:
    e = Fraction(eps)
    return math.ceil(3 * max(Fraction(3) / (7 * e), Fraction(40)))


def quadraticity_akklr_test(session: OracleSession, eps: float, reps: int | None = None,
                            seed=None) -> Verdict:
    """Queries all seven combinations of uniform x, y, z per iteration."""
    d = _need_cube(session)
    if reps is None:
        reps = akklr_reps(eps)
    session.announce("quadraticity_akklr")
    rng = random.Random(seed)
    bits = rng.getrandbits
    query = session.query
    start = session.query_count
    for _ in range(reps):
        x, y, z = bits(d), bits(d), bits(d)
        pts = [x, y, z, x ^ y, x ^ z, y ^ z, x ^ y ^ z]
        vals = [query(p) for p in pts]
        if all(v is not ERASED for v in vals) and _seven(vals):
            w = Witness(pts, vals, "quadraticity", tuple(range(7)))
            return _finish(session, start, w, reps=reps)
    return _finish(session, start, None, reps=reps)


@dataclass(frozen=True)
class Alg2Constants:
    t: int
    I: int
    J: int
    subset_sizes: tuple[int, ...]
    queries_per_round: int
    log10_alpha: float
    log10_ct: float
    log10_rounds: float

    def rounds(self, round_cap: int) -> tuple[int, bool]:
        """Rounds to run and whether the prescribed count was truncated."""
        if self.log10_rounds >= math.log10(round_cap):
            return round_cap, self.log10_rounds > math.log10(round_cap)
        return min(round_cap, math.ceil(10 ** self.log10_rounds)), False


def algorithm2_constants(t: int, eps: float) -> Alg2Constants:
    """Structure sizes and the prescribed round count (in log10)."""
    t = max(int(t), 1)
    I = (t + 1) ** 2 * (2 * t + 1) ** t
    J = ((t + 1) ** (t + 1) - 1) // t
    sizes = tuple((t + 1) * (2 * t + 1) ** (t - m) for m in range(t + 1))
    per_tree = I + sum((t + 1) ** m * (1 + sizes[m]) for m in range(t + 1))
    qpr = (t + 1) * per_tree + 1 + (t + 1) + 2
    K = I * J * (t + 1)
    ln_alpha = min(math.log(eps / 2), K * (math.log(7) - math.log(18 * K)))
    # c_t is the reciprocal of (t+1)^-(t+3) times the product over every
    # double-sum query block of (s t + 1)^-s
    ln_ct = (t + 3) * math.log(t + 1)
    ln_ct += (t + 1) * sum((t + 1) ** m * s * math.log(s * t + 1) for m, s in enumerate(sizes))
    ln_rounds = math.log(4) + ln_ct - ln_alpha
    ln10 = math.log(10)
    return Alg2Constants(t, I, J, sizes, qpr, ln_alpha / ln10, ln_ct / ln10, ln_rounds / ln10)


def quadraticity_online_test(session: OracleSession, eps: float, t: int | None = None, seed=None,
                             round_cap: int = 10**4, record: bool = False) -> Verdict:
    """Decoy-tree quadraticity tester.

    Each round builds t+1 reserves of x-decoys and t+1 trees of y-decoys,
    then checks one triple along a random root-to-leaf path.
    """
    if not 0 < eps < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    d = _need_cube(session)
    t = session.t if t is None else t
    consts = algorithm2_constants(t, eps)
    t = consts.t
    rounds, truncated = consts.rounds(round_cap)
    session.announce("quadraticity_online")
    rng = random.Random(seed)
    bits = rng.getrandbits
    query = session.query
    start = session.query_count
    sizes = consts.subset_sizes
    I = consts.I
    levels = [list(itertools.product(range(t + 1), repeat=m)) for m in range(t + 1)]
    log: list = []
    for rnd in range(rounds):
        trees = []
        for tree in range(t + 1):
            xs = [bits(d) for _ in range(I)]
            xv = [query(x) for x in xs]
            ys: dict[tuple, int] = {}
            yv: dict[tuple, Any] = {}
            xy: dict[tuple, Any] = {}
            members: dict[tuple, list[int]] = {}
            reserve = list(range(I))
            for m in range(t + 1):
                s = sizes[m]
                for path in levels[m]:
                    pool = reserve if m == 0 else members[path[:-1]]
                    expect = I if m == 0 else sizes[m - 1] - path[-1] * s
                    if len(pool) != expect:
                        raise AssertionError(f"reserve size {len(pool)} != {expect} at {path}")
                    if record:
                        log.append((rnd, tree, path, len(pool)))
                    y = bits(d)
                    ys[path] = y
                    yv[path] = query(y)
                    chosen = rng.sample(pool, s)
                    for i in chosen:
                        xy[(path, i)] = query(xs[i] ^ y)
                    taken = set(chosen)
                    pool[:] = [i for i in pool if i not in taken]
                    members[path] = chosen
                if m > 0 and record:
                    for parent in levels[m - 1]:
                        log.append((rnd, tree, parent + ("done",), len(members[parent])))
            trees.append((xs, xv, ys, yv, xy, members))
        z = bits(d)
        zv = query(z)
        tree = rng.randrange(t + 1)
        path = tuple(rng.randrange(t + 1) for _ in range(t))
        xs, xv, ys, yv, xy, members = trees[tree]
        yz = [query(ys[path[:m]] ^ z) for m in range(t + 1)]
        i = rng.choice(members[path])
        x = xs[i]
        xz = query(x ^ z)
        m = rng.randrange(t + 1)
        node = path[:m]
        y = ys[node]
        xyz = query(x ^ y ^ z)
        vals = [xv[i], yv[node], zv, xy[(node, i)], xz, yz[m], xyz]
        if all(v is not ERASED for v in vals) and _seven(vals):
            pts = [x, y, z, x ^ y, x ^ z, y ^ z, x ^ y ^ z]
            w = Witness(pts, vals, "quadraticity", tuple(range(7)))
            return _finish(session, start, w, rounds_run=rnd + 1, truncated=truncated,
                           set_log=log, constants=consts)
    return _finish(session, start, None, rounds_run=rounds, truncated=truncated,
                   set_log=log, constants=consts)


# ------------------------------------------------------------------ sequences

def sortedness_query_count(eps: float, r: int, c: int = SORTEDNESS_C) -> int:
    return math.ceil(2 * c * math.sqrt(r) / eps)


def sortedness_regime(n: int, r: int, eps: float, t: int, c: int = SORTEDNESS_C) -> bool:
    return Fraction(r) < Fraction(eps) ** 2 * n / (24 * c * c * max(t, 1))


def _sorted_violation(answered: list[tuple[int, int]]):
    """A pair (u, v), u < v, with value(u) > value(v), or None."""
    best = None  # largest value seen at a strictly smaller index
    for idx, group in itertools.groupby(sorted(answered), key=lambda p: p[0]):
        group = list(group)
        if best is not None and best[1] > group[0][1]:
            return best, group[0]
        top = group[-1]
        if best is None or top[1] > best[1]:
            best = top
    return None


def sortedness_uniform_test(session: OracleSession, eps: float, r: int | None = None,
                            seed=None, c: int = SORTEDNESS_C) -> Verdict:
    """Uniform index sample; rejects on a visible decreasing pair."""
    f = session.f
    if not isinstance(f, SequenceFunction):
        raise TypeError("sortedness_uniform_test needs a sequence")
    r = f.r if r is None else r
    k = sortedness_query_count(eps, r, c)
    regime = sortedness_regime(f.n, r, eps, session.t, c)
    session.announce("sortedness_uniform")
    rng = random.Random(seed)
    n = f.n
    query = session.query
    start = session.query_count
    answered = []
    for _ in range(k):
        i = rng.randrange(1, n + 1)
        a = query(i)
        if a is not ERASED:
            answered.append((i, a))
    hit = _sorted_violation(answered)
    w = None
    if hit is not None:
        (u, fu), (v, fv) = hit
        w = Witness([u, v], [fu, fv], "sortedness", (0, 1))
    return _finish(session, start, w, regime_ok=regime, r=r)


def _violates(prop: str, u: int, fu: int, v: int, fv: int) -> bool:
    if prop == "sortedness":
        return (u < v and fu > fv) or (v < u and fv > fu)
    if prop == "lipschitz_line":
        return abs(fu - fv) > abs(u - v)
    if prop == "lipschitz_cube":
        return abs(fu - fv) > (u ^ v).bit_count()
    raise ValueError(f"unknown property {prop!r}")


def scanning_test(session: OracleSession, prop: str, seed=None, limit: int | None = None) -> Verdict:
    """Queries every domain point in random order and rejects on any visible violating pair.

    Useful only on small domains; it is the most aggressive nonadaptive tester.
    """
    f = session.f
    if isinstance(f, SequenceFunction):
        domain = list(range(1, f.n + 1))
    else:
        domain = list(range(f.size))
    rng = random.Random(seed)
    rng.shuffle(domain)
    if limit is not None:
        domain = domain[:limit]
    session.announce("scan")
    start = session.query_count
    seen: list[tuple[int, int]] = []
    for x in domain:
        a = session.query(x)
        if a is not ERASED:
            seen.append((x, a))
    for (u, fu), (v, fv) in itertools.combinations(seen, 2):
        if _violates(prop, u, fu, v, fv):
            pid = "sortedness" if prop == "sortedness" else "lipschitz"
            return _finish(session, start, Witness([u, v], [fu, fv], pid, (0, 1)))
    return _finish(session, start, None)


TESTERS = {
    "blr": blr_test,
    "linearity_online": linearity_online_test,
    "linearity_simple": linearity_simple_test,
    "linearity_corruption": linearity_corruption_test,
    "quadraticity_akklr": quadraticity_akklr_test,
    "quadraticity_online": quadraticity_online_test,
    "sortedness_uniform": sortedness_uniform_test,
    "scan": scanning_test,
}
