"""Constructive duplicator strategy on universal bipartite graphs.

A state with budget p is valid when both graphs are (p+q)-universal
(q = distinct played vertices), the restricted adjacency matrices of the
played lists match positionally, and the 2^(p-1)-shadows of the played
sets agree. Each response preserves the invariant with the cap halved,
which forces a partial isomorphism when the budget runs out.

The response to a fresh A-side vertex builds the answering row pattern
class by class over {0,1}^{W_A}: classes fully below the halved cap are
copied exactly; classes hitting the cap keep the capped side saturated
and copy the other side.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .efgame import GameError, Position
from .graph import (
    Graph,
    GraphError,
    is_universal,
    matrices_match,
    shadow,
    shadows_equal,
)


class StrategyError(GameError):
    """Strategy cannot respond; carries a machine-readable check name."""

    def __init__(self, check: str, reason: str):
        super().__init__(reason)
        self.check = check
        self.reason = reason


def shadow_cap(p: int) -> int:
    """Shadow multiplicity cap certifying p remaining rounds."""
    return 1 << (p - 1) if p >= 1 else 0


@dataclass(frozen=True)
class StrategyState:
    left: Graph
    right: Graph
    played_left: tuple[int, ...]
    played_right: tuple[int, ...]
    budget: int


@dataclass(frozen=True)
class ClassRecord:
    u: str  # bit pattern over W_A
    m0: int
    m1: int
    case: str  # "small" | "m0-large" | "m1-large"

    def to_json(self) -> dict:
        return {"u": self.u, "m0": self.m0, "m1": self.m1, "case": self.case}


@dataclass(frozen=True)
class ResponseTrace:
    case: str  # "repeat" | "a-side" | "b-side"
    response: int
    row: tuple[tuple[int, int], ...] = ()  # (B'-vertex, bit) for a-side
    column: tuple[int, ...] = ()  # matched pattern for b-side
    classes: tuple[ClassRecord, ...] = ()

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "response": self.response,
            "row": [[v, b] for v, b in self.row],
            "column": list(self.column),
            "classes": [c.to_json() for c in self.classes],
        }


def _basis(g: Graph, played) -> list[int]:
    """W_A in first-occurrence order."""
    out, seen = [], set()
    for v in played:
        if v in g.part_a and v not in seen:
            seen.add(v)
            out.append(v)
    return out


def _played_b(g: Graph, played) -> set[int]:
    return {v for v in played if v in g.part_b}


def init_state(
    g: Graph, g2: Graph, played, played2, p: int
) -> StrategyState:
    """Validate the strategy hypotheses; raise StrategyError naming the
    first failed check."""
    if not (g.bipartite and g2.bipartite):
        raise StrategyError("bipartition", "both graphs need bipartitions")
    if len(played) != len(played2):
        raise StrategyError(
            "pairing",
            f"played lists differ in length: {len(played)} vs {len(played2)}",
        )
    if p < 0:
        raise StrategyError("budget", f"budget must be >= 0, got {p}")
    for i in range(len(played)):
        for j in range(i + 1, len(played)):
            if (played[i] == played[j]) != (played2[i] == played2[j]):
                raise StrategyError(
                    "pairing", f"equality pattern differs at positions {i},{j}"
                )
    q = len(set(played))
    level = p + q
    if level >= 1:
        if not is_universal(g, level):
            raise StrategyError(
                "universality", f"left graph not {level}-universal"
            )
        if not is_universal(g2, level):
            raise StrategyError(
                "universality", f"right graph not {level}-universal"
            )
    if not matrices_match(g, played, g2, played2):
        raise StrategyError("matrix", "restricted adjacency matrices differ")
    cap = shadow_cap(p)
    if cap >= 1 and not shadows_equal(
        shadow(g, played, cap), shadow(g2, played2, cap)
    ):
        raise StrategyError(
            "shadow", f"{cap}-shadows of the played sets differ"
        )
    return StrategyState(g, g2, tuple(played), tuple(played2), p)


def _build_row(
    g: Graph, g2: Graph, played, played2, v: int, new_cap: int
) -> tuple[dict[int, int], list[ClassRecord]]:
    """The A-side case: the answering row pattern x' over B' and the
    per-class accounting that produced it."""
    basis = _basis(g, played)
    basis2 = _basis(g2, played2)
    row: dict[int, int] = {}
    for w, w2 in zip(played, played2):
        if w in g.part_b:
            row[w2] = int(g.adjacent(v, w))

    wb = _played_b(g, played)
    wb2 = _played_b(g2, played2)
    rest = [b for b in g.b_vertices if b not in wb]
    rest2 = [b for b in g2.b_vertices if b not in wb2]

    # split each class u by v's bit; counts uncapped, m0/m1 capped
    splits: dict[tuple[int, ...], list[int]] = {}
    for b in rest:
        u = tuple(int(g.adjacent(a, b)) for a in basis)
        z_o = splits.setdefault(u, [0, 0])
        z_o[int(g.adjacent(v, b))] += 1
    classes: dict[tuple[int, ...], list[int]] = {}
    for b in rest2:
        u = tuple(int(g2.adjacent(a, b)) for a in basis2)
        classes.setdefault(u, []).append(b)

    records = []
    for u in sorted(set(splits) | set(classes)):
        z, o = splits.get(u, (0, 0))
        members = sorted(classes.get(u, []))
        if new_cap == 0:
            # last round: only the played columns constrain the row
            for b in members:
                row[b] = 0
            continue
        m0, m1 = min(z, new_cap), min(o, new_cap)
        if m0 < new_cap and m1 < new_cap:
            case = "small"
            if len(members) != m0 + m1:
                raise StrategyError(
                    "shadow",
                    f"class {u}: {len(members)} columns vs m0+m1 = {m0 + m1}",
                )
            ones_at = set(members[m0:])
        elif m0 >= new_cap:
            case = "m0-large"
            ones = min(m1, new_cap)
            if len(members) - ones < new_cap:
                raise StrategyError(
                    "shadow",
                    f"class {u}: cannot keep {new_cap} zero columns",
                )
            ones_at = set(members[:ones])
        else:
            case = "m1-large"
            if len(members) - m0 < new_cap:
                raise StrategyError(
                    "shadow",
                    f"class {u}: cannot keep {new_cap} one columns",
                )
            ones_at = set(members[m0:])
        for b in members:
            row[b] = 1 if b in ones_at else 0
        records.append(ClassRecord("".join(map(str, u)), m0, m1, case))
    return row, records


def respond(
    st: StrategyState, spoiler_side: str, v: int, verify: bool = False
) -> tuple[int, StrategyState, ResponseTrace]:
    """Answer the spoiler's vertex; returns the response, the new state
    (budget decremented) and the construction trace."""
    if st.budget < 1:
        raise StrategyError("budget", "budget exhausted")
    if spoiler_side == "left":
        g, g2 = st.left, st.right
        played, played2 = st.played_left, st.played_right
    elif spoiler_side == "right":
        g, g2 = st.right, st.left
        played, played2 = st.played_right, st.played_left
    else:
        raise StrategyError("side", f"unknown side {spoiler_side!r}")
    if not 0 <= v < g.n:
        raise StrategyError("vertex", f"vertex {v} out of range")

    p = st.budget
    new_cap = shadow_cap(p - 1)

    trace: ResponseTrace
    if v in played:
        resp = played2[played.index(v)]
        trace = ResponseTrace("repeat", resp)
    elif v in g.part_a:
        row, records = _build_row(g, g2, played, played2, v, new_cap)
        resp = None
        used = set(played2)
        for a in g2.a_vertices:
            if a in used:
                continue
            if all(int(g2.adjacent(a, b)) == bit for b, bit in row.items()):
                resp = a
                break
        if resp is None:
            raise StrategyError(
                "universality", "no unused vertex realizes the answering row"
            )
        trace = ResponseTrace(
            "a-side", resp, row=tuple(sorted(row.items())), classes=tuple(records)
        )
    else:
        basis = _basis(g, played)
        basis2 = _basis(g2, played2)
        u = tuple(int(g.adjacent(a, v)) for a in basis)
        wb2 = _played_b(g2, played2)
        resp = None
        for b in g2.b_vertices:
            if b in wb2:
                continue
            if tuple(int(g2.adjacent(a, b)) for a in basis2) == u:
                resp = b
                break
        if resp is None:
            raise StrategyError(
                "shadow", f"no unused column realizes pattern {u}"
            )
        trace = ResponseTrace("b-side", resp, column=u)

    if spoiler_side == "left":
        new = StrategyState(
            st.left, st.right, st.played_left + (v,), st.played_right + (resp,), p - 1
        )
    else:
        new = StrategyState(
            st.left, st.right, st.played_left + (resp,), st.played_right + (v,), p - 1
        )
    if verify:
        assert_invariants(new)
    return resp, new, trace


def assert_invariants(st: StrategyState) -> None:
    """The inductive invariant: matching matrices and equal capped shadows."""
    if not matrices_match(st.left, st.played_left, st.right, st.played_right):
        raise StrategyError("matrix", "post-move matrices differ")
    cap = shadow_cap(st.budget)
    if cap >= 1 and not shadows_equal(
        shadow(st.left, st.played_left, cap),
        shadow(st.right, st.played_right, cap),
    ):
        raise StrategyError("shadow", f"post-move {cap}-shadows differ")


class StrategyAgent:
    """Duplicator agent for efgame.play carrying the evolving state."""

    def __init__(self, state: StrategyState, verify: bool = False):
        self.state = state
        self.verify = verify
        self.traces: list[ResponseTrace] = []

    def __call__(self, pos: Position, rng) -> int:
        side, v = pos.pending
        resp, self.state, trace = respond(self.state, side, v, verify=self.verify)
        self.traces.append(trace)
        return resp


def as_agent(st: StrategyState, verify: bool = False) -> StrategyAgent:
    return StrategyAgent(st, verify)
