"""The full-information quadraticity game.

Player 1 draws points, blue edges between existing non-adjacent points and
blue triangles. After every Player 1 move, Player 2 takes up to t steps, each
a red edge or a red triangle. Player 1 wins once it colors blue a triangle
whose three edges are blue.

Player 1 follows the decoy-tree strategy: per tree a reserve of x-decoys,
a (t+1)-ary tree of y-decoys wired to shrinking subsets of the reserve, then
a point z and a walk from a root to a leaf that always steps into a subtree
Player 2 has not touched.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterator

from .adversaries import Strategy
from .testers import algorithm2_constants

PLAYER1 = "player1"
TIMEOUT = "timeout"


def _pair(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def _tri(u: int, v: int, w: int) -> tuple[int, int, int]:
    return tuple(sorted((u, v, w)))


class IllegalMove(ValueError):
    pass


@dataclass
class GameState:
    t: int
    n_points: int = 0
    blue_edges: set = field(default_factory=set)
    red_edges: set = field(default_factory=set)
    blue_triangles: set = field(default_factory=set)
    red_triangles: set = field(default_factory=set)
    turn: str = PLAYER1

    def adjacent(self, u: int, v: int) -> bool:
        e = _pair(u, v)
        return e in self.blue_edges or e in self.red_edges

    def colored(self, u: int, v: int, w: int) -> bool:
        k = _tri(u, v, w)
        return k in self.blue_triangles or k in self.red_triangles

    def _exists(self, *pts: int) -> None:
        if len(set(pts)) != len(pts):
            raise IllegalMove("points must be distinct")
        for p in pts:
            if not 0 <= p < self.n_points:
                raise IllegalMove(f"point {p} does not exist")

    def add_point(self) -> int:
        self.n_points += 1
        return self.n_points - 1

    def add_edge(self, u: int, v: int, blue: bool) -> None:
        self._exists(u, v)
        if self.adjacent(u, v):
            raise IllegalMove(f"points {u} and {v} are already adjacent")
        (self.blue_edges if blue else self.red_edges).add(_pair(u, v))

    def add_triangle(self, u: int, v: int, w: int, blue: bool) -> None:
        self._exists(u, v, w)
        if self.colored(u, v, w):
            raise IllegalMove("triangle already colored")
        if blue and not all(_pair(a, b) in self.blue_edges for a, b in ((u, v), (u, w), (v, w))):
            raise IllegalMove("Player 1 colors only triangles with three blue edges")
        (self.blue_triangles if blue else self.red_triangles).add(_tri(u, v, w))

    def has_blue_triangle(self) -> bool:
        return any(all(_pair(a, b) in self.blue_edges for a, b in itertools.combinations(tri, 2))
                   for tri in self.blue_triangles)

    def summary(self) -> dict:
        return {"points": self.n_points, "blue_edges": len(self.blue_edges),
                "red_edges": len(self.red_edges), "blue_triangles": len(self.blue_triangles),
                "red_triangles": len(self.red_triangles)}


@dataclass
class GameResult:
    winner: str
    moves: int
    p2_steps: int
    forfeits: int
    summary: dict
    move_log: list = field(default_factory=list)


class GameView:
    """What a Player 2 strategy sees: the whole state plus Player 1's last move."""

    def __init__(self, state: GameState, rng: random.Random):
        self.state = state
        self.t = state.t
        self.rng = rng
        self.last_move: tuple = ()
        self.roles: dict[int, str] = {}


# ------------------------------------------------------------ Player 1

class StrategyInvariantError(AssertionError):
    """Player 1 found no unspoiled option, which the analysis rules out."""


def player1_moves(state: GameState, t: int, roles: dict) -> Iterator[tuple]:
    """Decoy-tree strategy. Yields moves; the caller applies them and lets
    Player 2 respond before resuming. Point ids are read back from state."""
    c = algorithm2_constants(t, 0.5)
    sizes = c.subset_sizes
    levels = [list(itertools.product(range(t + 1), repeat=m)) for m in range(t + 1)]
    trees = []
    for tree in range(t + 1):
        reserve = []
        for _ in range(c.I):
            yield ("point",)
            reserve.append(state.n_points - 1)
            roles[reserve[-1]] = f"x{tree}"
        ys: dict[tuple, int] = {}
        members: dict[tuple, list[int]] = {}
        for m in range(t + 1):
            for path in levels[m]:
                pool = reserve if m == 0 else members[path[:-1]]
                yield ("point",)
                y = state.n_points - 1
                ys[path] = y
                roles[y] = f"y{tree}:{''.join(map(str, path))}"
                chosen: list[int] = []
                while len(chosen) < sizes[m]:
                    opts = [x for x in pool if x not in chosen and not state.adjacent(x, y)]
                    if not opts:
                        raise StrategyInvariantError(f"no unspoiled decoy for y at {path}")
                    chosen.append(opts[0])
                    yield ("edge", opts[0], y)
                taken = set(chosen)
                pool[:] = [x for x in pool if x not in taken]
                members[path] = chosen
        trees.append((ys, members))

    yield ("point",)
    z = state.n_points - 1
    roles[z] = "z"

    def spoiled(tree: int, node: tuple) -> bool:
        """Whether Player 2 touched anything the walk could still need below node."""
        ys, members = trees[tree]
        sub = [p for p in ys if p[:len(node)] == node]
        ancestors = [node[:k] for k in range(len(node))]
        usable_y = {ys[p] for p in sub} | {ys[p] for p in ancestors}
        xs = set(members[node])
        for p in sub:
            if _pair(z, ys[p]) in state.red_edges:
                return True
        for x in xs:
            if _pair(z, x) in state.red_edges:
                return True
            for y in usable_y:
                if _tri(x, y, z) in state.red_triangles:
                    return True
        return False

    clean = [tr for tr in range(t + 1) if not spoiled(tr, ())]
    if not clean:
        raise StrategyInvariantError("every tree spoiled")
    tree = clean[0]
    ys, members = trees[tree]
    node: tuple = ()
    yield ("edge", z, ys[node])
    for _ in range(t):
        clean = [node + (j,) for j in range(t + 1) if not spoiled(tree, node + (j,))]
        if not clean:
            raise StrategyInvariantError(f"every child of {node} spoiled")
        node = clean[0]
        yield ("edge", z, ys[node])
    path_ys = [ys[node[:k]] for k in range(t + 1)]
    ok_x = [x for x in members[node]
            if not state.adjacent(z, x)
            and not any(_tri(x, y, z) in state.red_triangles for y in path_ys)]
    if not ok_x:
        raise StrategyInvariantError("every leaf decoy spoiled")
    x = ok_x[0]
    yield ("edge", z, x)
    free = [y for y in path_ys if not state.colored(x, y, z)]
    if not free:
        raise StrategyInvariantError("every final triangle spoiled")
    yield ("triangle", x, free[0], z)


def strategy_move_count(t: int) -> int:
    """Moves Player 1 makes in every playout (the bound asserted against move_cap)."""
    return algorithm2_constants(t, 0.5).queries_per_round


# ------------------------------------------------------------ Player 2

class PassiveSpoiler(Strategy):
    name = "passive"
    passive = True


class RandomSpoiler(Strategy):
    """Random legal red edges and red triangles."""

    name = "random_spoiler"

    def act(self, view: GameView) -> list:
        st = view.state
        rng = view.rng
        n = st.n_points
        out: list = []
        picked = set()
        for _ in range(self.budget(view)):
            for _try in range(50):
                if n >= 3 and rng.random() < 0.5:
                    u, v, w = rng.sample(range(n), 3)
                    key = ("triangle",) + _tri(u, v, w)
                    if not st.colored(u, v, w) and key not in picked:
                        break
                elif n >= 2:
                    u, v = rng.sample(range(n), 2)
                    key = ("edge",) + _pair(u, v)
                    if not st.adjacent(u, v) and key not in picked:
                        break
            else:
                continue
            picked.add(key)
            out.append(key)
        return out


class GreedySpoiler(Strategy):
    """Reds the newest blue structure.

    After a new point: red edges from it to the newest non-adjacent points.
    After a blue edge: red triangles that edge could complete, then red
    edges from its newer endpoint.
    """

    name = "greedy_spoiler"

    def act(self, view: GameView) -> list:
        st = view.state
        budget = self.budget(view)
        move = view.last_move
        out: list = []
        if not move:
            return out
        if move[0] == "point":
            p = st.n_points - 1
            for q in range(p - 1, -1, -1):
                if len(out) >= budget:
                    break
                if not st.adjacent(p, q):
                    out.append(("edge",) + _pair(p, q))
            return out
        if move[0] == "edge":
            u, v = move[1], move[2]
            for w in range(st.n_points - 1, -1, -1):
                if len(out) >= budget:
                    return out
                if w in (u, v) or st.colored(u, v, w):
                    continue
                if _pair(u, w) in st.blue_edges and _pair(v, w) in st.blue_edges:
                    out.append(("triangle",) + _tri(u, v, w))
            p = max(u, v)
            for w in range(st.n_points - 1, -1, -1):
                if len(out) >= budget:
                    break
                if w != p and not st.adjacent(p, w):
                    out.append(("edge",) + _pair(p, w))
        return out


class TreeSpoiler(Strategy):
    """Knows the decoy-tree layout and spoils whatever Player 1 needs next.

    After z: red edges from z to tree roots. After a walk edge to a y-decoy:
    red edges from z to its children, or to its decoys at a leaf. After the
    edge to an x-decoy: red triangles on that decoy.
    """

    name = "tree_spoiler"

    def act(self, view: GameView) -> list:
        st = view.state
        roles = view.roles
        budget = self.budget(view)
        last = view.last_move
        z = next((p for p, r in roles.items() if r == "z"), None)
        if z is None or not last:
            return []
        out: list = []

        def edges_to(points):
            for p in points:
                if len(out) >= budget:
                    break
                if not st.adjacent(z, p):
                    out.append(("edge",) + _pair(z, p))

        if last == ("point",) and st.n_points - 1 == z:
            edges_to(p for p, r in roles.items() if r.startswith("y") and r.endswith(":"))
        elif last[0] == "edge" and z in last[1:3]:
            other = last[1] if last[2] == z else last[2]
            role = roles.get(other, "")
            if role.startswith("y"):
                kids = [p for p, r in roles.items()
                        if r.startswith(role) and len(r) == len(role) + 1]
                if kids:
                    edges_to(kids)
                else:
                    edges_to(p for p, r in roles.items()
                             if r.startswith("x") and _pair(p, other) in st.blue_edges)
            elif role.startswith("x"):
                for y in (p for p, r in roles.items() if r.startswith("y")):
                    if len(out) >= budget:
                        break
                    if (_pair(other, y) in st.blue_edges and _pair(y, z) in st.blue_edges
                            and not st.colored(other, y, z)):
                        out.append(("triangle",) + _tri(other, y, z))
        return out


P2_STRATEGIES = {cls.name: cls for cls in (PassiveSpoiler, RandomSpoiler, GreedySpoiler, TreeSpoiler)}


def make_p2(name, t: int) -> Strategy:
    if isinstance(name, Strategy):
        return name
    if name not in P2_STRATEGIES:
        raise KeyError(f"unknown Player 2 strategy {name!r}; known: {sorted(P2_STRATEGIES)}")
    return P2_STRATEGIES[name](t)


# ------------------------------------------------------------ driver

def play(t: int, p2_strategy="passive", seed=None, move_cap: int | None = None,
         log_moves: bool = False) -> GameResult:
    if t < 1:
        raise ValueError("the game needs t >= 1")
    bound = strategy_move_count(t)
    if move_cap is None:
        move_cap = bound
    if move_cap < bound:
        raise ValueError(f"move_cap {move_cap} is below the strategy's move bound {bound}")
    state = GameState(t)
    view = GameView(state, random.Random(seed))
    p2 = make_p2(p2_strategy, t)
    p2.reset(view)
    p1 = player1_moves(state, t, view.roles)
    log: list[str] = []
    moves = p2_steps = forfeits = 0
    winner = TIMEOUT
    for move in p1:
        if moves >= move_cap:
            break
        state.turn = PLAYER1
        if move[0] == "point":
            state.add_point()
        elif move[0] == "edge":
            state.add_edge(move[1], move[2], blue=True)
        else:
            state.add_triangle(*move[1:], blue=True)
        moves += 1
        if log_moves:
            log.append("P1 " + " ".join(map(str, move)))
        if move[0] == "triangle" and state.has_blue_triangle():
            winner = PLAYER1
            break
        state.turn = "player2"
        view.last_move = move
        if p2.passive:
            continue
        steps = list(p2.act(view) or [])
        if len(steps) > t:
            forfeits += 1
            if log_moves:
                log.append(f"P2 forfeit ({len(steps)} steps > budget {t})")
            continue
        for step in steps:
            try:
                if step[0] == "edge":
                    state.add_edge(step[1], step[2], blue=False)
                elif step[0] == "triangle":
                    state.add_triangle(step[1], step[2], step[3], blue=False)
                else:
                    raise IllegalMove(f"unknown step {step!r}")
            except IllegalMove:
                forfeits += 1
                if log_moves:
                    log.append("P2 illegal " + " ".join(map(str, step)))
                break
            p2_steps += 1
            if log_moves:
                log.append("P2 " + " ".join(map(str, step)))
    if (winner == PLAYER1) != state.has_blue_triangle():
        raise AssertionError("winner flag disagrees with the final state")
    return GameResult(winner, moves, p2_steps, forfeits, state.summary(), log)
