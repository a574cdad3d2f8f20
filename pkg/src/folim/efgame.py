"""Ehrenfeucht-Fraisse game engine: the win condition, an exhaustive
memoized solver, and a pluggable agent harness.

Each round the spoiler picks a vertex in either graph, the duplicator
answers in the other. The duplicator wins when the final pebble
correspondence (roots included) is a partial isomorphism.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .graph import CapExceeded, Graph
from .formula import (
    Adj,
    And,
    Eq,
    Exists,
    FALSE,
    Forall,
    Formula,
    FormulaFamily,
    Not,
    Or,
    TRUE,
    Var,
)

SPOILER = "spoiler"
DUPLICATOR = "duplicator"

SOLVER_SIZE_CAP = 400  # |G| * |H|
SOLVER_ROUNDS_CAP = 5


class GameError(Exception):
    pass


@dataclass(frozen=True)
class Position:
    """Game state: pebble pairs played so far (roots first) and the
    spoiler's pending move awaiting a response, if any."""

    left: Graph
    right: Graph
    pairs: tuple[tuple[int, int], ...]
    rounds_left: int
    pending: tuple[str, int] | None = None  # (side, vertex)


@dataclass(frozen=True)
class Move:
    round: int
    side: str  # side the spoiler chose
    vertex: int
    response: int

    def to_json(self) -> dict:
        return {
            "round": self.round,
            "side": self.side,
            "vertex": self.vertex,
            "response": self.response,
        }


@dataclass(frozen=True)
class GameResult:
    winner: str
    transcript: tuple[Move, ...]
    reason: str = ""

    def to_json(self) -> dict:
        out = {
            "winner": self.winner,
            "transcript": [m.to_json() for m in self.transcript],
        }
        if self.reason:
            out["reason"] = self.reason
        return out


def partial_iso(
    gl: Graph, gr: Graph, pairs: Sequence[tuple[int, int]]
) -> bool:
    """True iff v_i -> w_i is a partial isomorphism: equalities and
    adjacencies agree at every index pair."""
    for v, w in pairs:
        if not (0 <= v < gl.n and 0 <= w < gr.n):
            raise GameError(f"pebble pair ({v},{w}) out of range")
    for i, (v, w) in enumerate(pairs):
        for v2, w2 in pairs[i + 1 :]:
            if (v == v2) != (w == w2):
                return False
            if gl.adjacent(v, v2) != gr.adjacent(w, w2):
                return False
    return True


def solve(
    gl: Graph,
    gr: Graph,
    pairs: Sequence[tuple[int, int]] = (),
    p: int = 0,
    size_cap: int = SOLVER_SIZE_CAP,
    rounds_cap: int = SOLVER_ROUNDS_CAP,
) -> str:
    """Decide the p-round game by exhaustive minimax with memoization.

    The memo key is the unordered set of pebble pairs plus the remaining
    round count; future play depends only on the induced correspondence.
    """
    if gl.n * gr.n > size_cap:
        raise CapExceeded(f"|G|*|H| = {gl.n * gr.n} exceeds cap {size_cap}")
    if p > rounds_cap:
        raise CapExceeded(f"p = {p} exceeds cap {rounds_cap}")

    memo: dict = {}

    def win(pairset: frozenset, rounds: int) -> bool:
        """True iff the duplicator wins from here."""
        key = (pairset, rounds)
        hit = memo.get(key)
        if hit is not None:
            return hit
        pl = tuple(pairset)
        if not partial_iso(gl, gr, pl):
            memo[key] = False
            return False
        if rounds == 0:
            memo[key] = True
            return True
        result = True
        for left_side in (True, False):
            graph_n = gl.n if left_side else gr.n
            other_n = gr.n if left_side else gl.n
            for v in range(graph_n):
                answered = False
                for w in range(other_n):
                    pair = (v, w) if left_side else (w, v)
                    if win(pairset | {pair}, rounds - 1):
                        answered = True
                        break
                if not answered:
                    result = False
                    break
            if not result:
                break
        memo[key] = result
        return result

    return DUPLICATOR if win(frozenset(pairs), p) else SPOILER


# ---------------------------------------------------------------------------
# Agents

Agent = Callable[[Position, random.Random], object]
# spoiler agents return (side, vertex); duplicator agents return a vertex
# answering position.pending


def random_spoiler(pos: Position, rng: random.Random):
    side = rng.choice(["left", "right"])
    g = pos.left if side == "left" else pos.right
    return side, rng.randrange(g.n)


def random_duplicator(pos: Position, rng: random.Random):
    side, _ = pos.pending
    g = pos.right if side == "left" else pos.left
    return rng.randrange(g.n)


def mirror_duplicator(pos: Position, rng: random.Random):
    """Copy the spoiler's vertex; only sound when both graphs coincide."""
    return pos.pending[1]


def twin_representatives(g: Graph, pebbled: Sequence[int] = ()) -> list[int]:
    """One lowest-id vertex per adjacency-row class among unpebbled
    vertices, plus every pebbled vertex.

    Swapping two unpebbled vertices with identical rows is an
    automorphism fixing the pebbles, so restricting move enumeration to
    these representatives loses no generality.
    """
    pebbled_set = set(pebbled)
    reps = sorted(pebbled_set)
    seen: set[int] = set()
    for v in range(g.n):
        if v in pebbled_set:
            continue
        row = g.adj[v]
        if row not in seen:
            seen.add(row)
            reps.append(v)
    return reps


def minimax_spoiler(pos: Position, rng: random.Random):
    """Play the lowest (side, vertex) move that wins if one exists."""
    for side in ("left", "right"):
        g = pos.left if side == "left" else pos.right
        other = pos.right if side == "left" else pos.left
        for v in range(g.n):
            refuted = True
            for w in range(other.n):
                pair = (v, w) if side == "left" else (w, v)
                if (
                    solve(pos.left, pos.right, pos.pairs + (pair,), pos.rounds_left - 1)
                    == DUPLICATOR
                ):
                    refuted = False
                    break
            if refuted:
                return side, v
    return "left", 0


def minimax_duplicator(pos: Position, rng: random.Random):
    """Answer with the lowest winning vertex, or vertex 0 when lost."""
    side, v = pos.pending
    other = pos.right if side == "left" else pos.left
    for w in range(other.n):
        pair = (v, w) if side == "left" else (w, v)
        if (
            solve(pos.left, pos.right, pos.pairs + (pair,), pos.rounds_left - 1)
            == DUPLICATOR
        ):
            return w
    return 0


def play(
    gl: Graph,
    gr: Graph,
    roots_l: Sequence[int],
    roots_r: Sequence[int],
    p: int,
    spoiler: Agent,
    duplicator: Agent,
    seed: int = 0,
) -> GameResult:
    """Run p rounds after seeding the pebble pairs with the roots.

    An agent returning an invalid move loses immediately; the bad move is
    recorded in the transcript with response -1.
    """
    if len(roots_l) != len(roots_r):
        raise GameError("root lists must have equal length")
    pairs = tuple(zip(roots_l, roots_r))
    for v, w in pairs:
        if not (0 <= v < gl.n and 0 <= w < gr.n):
            raise GameError(f"root pair ({v},{w}) out of range")
    rng = random.Random(seed)
    transcript: list[Move] = []
    for rnd in range(1, p + 1):
        pos = Position(gl, gr, pairs, p - rnd + 1)
        try:
            move = spoiler(pos, rng)
            side, v = move
            g = gl if side == "left" else gr
            if side not in ("left", "right") or not 0 <= v < g.n:
                raise GameError(f"invalid spoiler move {move!r}")
        except GameError:
            transcript.append(Move(rnd, "left", -1, -1))
            return GameResult(DUPLICATOR, tuple(transcript), "spoiler made an invalid move")
        pos = Position(gl, gr, pairs, p - rnd + 1, pending=(side, v))
        try:
            w = duplicator(pos, rng)
            other = gr if side == "left" else gl
            if not isinstance(w, int) or not 0 <= w < other.n:
                raise GameError(f"invalid duplicator response {w!r}")
        except GameError as exc:
            transcript.append(Move(rnd, side, v, -1))
            return GameResult(
                SPOILER, tuple(transcript), f"duplicator forfeited: {exc}"
            )
        pair = (v, w) if side == "left" else (w, v)
        pairs = pairs + (pair,)
        transcript.append(Move(rnd, side, v, w))
    winner = DUPLICATOR if partial_iso(gl, gr, pairs) else SPOILER
    return GameResult(winner, tuple(transcript))


# ---------------------------------------------------------------------------
# Sentence batteries


def _random_atom(rng: random.Random, nvars: int) -> Formula:
    if nvars == 0:
        return TRUE if rng.random() < 0.5 else FALSE
    u = Var(rng.randrange(nvars) + 1)
    v = Var(rng.randrange(nvars) + 1)
    if rng.random() < 0.75:
        return Adj(u, v)
    return Eq(u, v)


def _random_boolean(rng: random.Random, nvars: int, budget: int) -> Formula:
    roll = rng.random()
    if budget == 0 or roll < 0.5:
        atom = _random_atom(rng, nvars)
        return Not(atom) if rng.random() < 0.3 else atom
    left = _random_boolean(rng, nvars, budget - 1)
    right = _random_boolean(rng, nvars, budget - 1)
    return And((left, right)) if roll < 0.75 else Or((left, right))


def _random_sentence(rng: random.Random, depth: int, nvars: int) -> Formula:
    if depth > 0 and (nvars == 0 or rng.random() < 0.8):
        body = _random_sentence(rng, depth - 1, nvars + 1)
        if rng.random() < 0.5:
            return Exists(nvars + 1, body)
        return Forall(nvars + 1, body)
    return _random_boolean(rng, nvars, budget=2)


def sample_sentence_battery(depth: int, count: int, seed: int) -> FormulaFamily:
    """Random sentences of quantifier depth <= depth, deterministic per seed."""
    if depth > 4:
        raise GameError(f"battery depth {depth} exceeds cap 4")
    rng = random.Random(seed)
    sentences = tuple(_random_sentence(rng, depth, 0) for _ in range(count))
    return FormulaFamily(sentences, m=0)
