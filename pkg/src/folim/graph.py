"""Finite graphs with optional bipartition and roots; the H_n family;
restricted adjacency matrices, shadows and universality."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class GraphError(Exception):
    pass


class CapExceeded(GraphError):
    """Enumeration guardrail tripped; raise the cap to proceed."""


HN_CAP = 20
UNIVERSALITY_CAP = 20  # max |B| for is_universal


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1.

    Adjacency is stored as one bitmask per vertex. A bipartition (A, B)
    with no internal edges and an ordered root list are optional.
    """

    n: int
    adj: tuple[int, ...]  # adj[v] bit u set iff u ~ v
    part_a: frozenset[int] | None = None
    part_b: frozenset[int] | None = None
    roots: tuple[int, ...] = ()

    def adjacent(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    @property
    def bipartite(self) -> bool:
        return self.part_a is not None

    def side(self, v: int) -> str:
        if self.part_a is None:
            raise GraphError("graph has no bipartition")
        return "A" if v in self.part_a else "B"

    @property
    def a_vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self.part_a))

    @property
    def b_vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self.part_b))

    def edges(self) -> list[tuple[int, int]]:
        return [
            (u, v)
            for u in range(self.n)
            for v in range(u + 1, self.n)
            if self.adjacent(u, v)
        ]

    def edge_count(self) -> int:
        return sum(self.degree(v) for v in range(self.n)) // 2

    def with_roots(self, roots: Sequence[int]) -> "Graph":
        for r in roots:
            if not 0 <= r < self.n:
                raise GraphError(f"root {r} out of range")
        return Graph(self.n, self.adj, self.part_a, self.part_b, tuple(roots))

    def row_pattern(self, a: int, columns: Sequence[int]) -> tuple[int, ...]:
        """0/1 pattern of vertex a against the given column vertices."""
        return tuple(int(self.adjacent(a, b)) for b in columns)

    def to_json(self) -> dict:
        out: dict = {"n": self.n, "edges": [[u, v] for u, v in self.edges()]}
        if self.bipartite:
            out["bipartition"] = {
                "A": sorted(self.part_a),
                "B": sorted(self.part_b),
            }
        if self.roots:
            out["roots"] = list(self.roots)
        return out

    @staticmethod
    def from_json(data: dict) -> "Graph":
        bip = data.get("bipartition")
        return make_graph(
            data["n"],
            [tuple(e) for e in data["edges"]],
            bipartition=(bip["A"], bip["B"]) if bip else None,
            roots=data.get("roots", ()),
        )

    @staticmethod
    def from_edge_list_text(text: str) -> "Graph":
        """Plain format: first line "n m", then m lines "u v"."""
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise GraphError("empty edge-list input")
        n, m = map(int, lines[0].split())
        edges = [tuple(map(int, ln.split())) for ln in lines[1 : m + 1]]
        if len(edges) != m:
            raise GraphError(f"expected {m} edge lines, found {len(edges)}")
        return make_graph(n, edges)


def make_graph(
    n: int,
    edges: Iterable[tuple[int, int]],
    bipartition: tuple[Iterable[int], Iterable[int]] | None = None,
    roots: Sequence[int] = (),
) -> Graph:
    """Validated graph; duplicate edges collapse, loops are rejected."""
    if n < 0:
        raise GraphError(f"vertex count must be >= 0, got {n}")
    adj = [0] * n
    part_a = part_b = None
    if bipartition is not None:
        part_a = frozenset(bipartition[0])
        part_b = frozenset(bipartition[1])
        if part_a & part_b:
            raise GraphError("bipartition parts overlap")
        if part_a | part_b != frozenset(range(n)):
            raise GraphError("bipartition must cover all vertices")
    for u, v in edges:
        if u == v:
            raise GraphError(f"self-loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u},{v}) out of range")
        if part_a is not None and ((u in part_a) == (v in part_a)):
            raise GraphError(f"edge ({u},{v}) inside one part")
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    for r in roots:
        if not 0 <= r < n:
            raise GraphError(f"root {r} out of range")
    return Graph(n, tuple(adj), part_a, part_b, tuple(roots))


def complete_graph(n: int) -> Graph:
    return make_graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def generate_hn(n: int, cap: int = HN_CAP) -> Graph:
    """The bipartite graph H_n: A = {0..2^n-1} x {0..n-1}, B = {0..n-1};
    (a, a') is adjacent to b iff bit b of a is 1.

    Vertex ids: A-vertex (a, a') -> a*n + a', B-vertex b -> n*2^n + b.
    """
    if n < 1:
        raise GraphError(f"H_n needs n >= 1, got {n}")
    if n > cap:
        raise CapExceeded(f"H_{n} exceeds cap {cap}")
    pow2 = 1 << n
    na = n * pow2
    adj = [0] * (na + n)
    for a in range(pow2):
        if a == 0:
            continue
        for b in range(n):
            if a >> b & 1:
                bid = na + b
                for aprime in range(n):
                    aid = a * n + aprime
                    adj[aid] |= 1 << bid
                    adj[bid] |= 1 << aid
    return Graph(
        n=na + n,
        adj=tuple(adj),
        part_a=frozenset(range(na)),
        part_b=frozenset(range(na, na + n)),
    )


def hn_a_vertex(n: int, a: int, aprime: int) -> int:
    return a * n + aprime


def hn_b_vertex(n: int, b: int) -> int:
    return n * (1 << n) + b


def is_universal(g: Graph, l: int, cap: int = UNIVERSALITY_CAP) -> bool:
    """True iff every 0/1 vector over B occurs at least l times among the
    A-side neighborhood patterns (rows of the bipartite adjacency matrix)."""
    if not g.bipartite:
        raise GraphError("universality needs a bipartition")
    if l < 1:
        raise GraphError(f"multiplicity must be >= 1, got {l}")
    b_order = g.b_vertices
    if len(b_order) > cap:
        raise CapExceeded(f"|B| = {len(b_order)} exceeds cap {cap}")
    hist = Counter(g.row_pattern(a, b_order) for a in g.part_a)
    if len(hist) < 1 << len(b_order):
        return False
    return min(hist.values()) >= l


@dataclass(frozen=True)
class RestrictedMatrix:
    """Bipartite adjacency submatrix with rows W_A and columns W_B in
    played order."""

    rows: tuple[int, ...]
    cols: tuple[int, ...]
    entries: tuple[tuple[int, ...], ...]  # entries[i][j] = adj(rows[i], cols[j])

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    def to_json(self) -> dict:
        return {
            "rows": list(self.rows),
            "cols": list(self.cols),
            "entries": [list(r) for r in self.entries],
        }


def _split_played(g: Graph, w: Sequence[int]) -> tuple[list[int], list[int]]:
    """W_A and W_B in first-occurrence order."""
    wa: list[int] = []
    wb: list[int] = []
    seen = set()
    for v in w:
        if not 0 <= v < g.n:
            raise GraphError(f"vertex {v} out of range")
        if v in seen:
            continue
        seen.add(v)
        (wa if v in g.part_a else wb).append(v)
    return wa, wb


def restricted_matrix(g: Graph, w: Sequence[int]) -> RestrictedMatrix:
    if not g.bipartite:
        raise GraphError("restricted matrix needs a bipartition")
    wa, wb = _split_played(g, w)
    entries = tuple(tuple(int(g.adjacent(a, b)) for b in wb) for a in wa)
    return RestrictedMatrix(tuple(wa), tuple(wb), entries)


def matrices_match(
    g: Graph, w: Sequence[int], g2: Graph, w2: Sequence[int]
) -> bool:
    """Positional comparison: sides match at every position and the
    bipartite adjacency entries agree under w_i <-> w2_i."""
    if len(w) != len(w2):
        raise GraphError(f"length mismatch: {len(w)} vs {len(w2)}")
    if not (g.bipartite and g2.bipartite):
        raise GraphError("matrix comparison needs bipartitions")
    for v, v2 in zip(w, w2):
        if (v in g.part_a) != (v2 in g2.part_a):
            return False
    for i, (v, v2) in enumerate(zip(w, w2)):
        if v not in g.part_a:
            continue
        for u, u2 in zip(w, w2):
            if u in g.part_a:
                continue
            if g.adjacent(v, u) != g2.adjacent(v2, u2):
                return False
    return True


@dataclass(frozen=True)
class ShadowMultiset:
    """Multiset of 0/1 column patterns over an ordered basis W_A, each
    capped at the multiplicity that produced it."""

    basis: tuple[int, ...]
    counts: tuple[tuple[tuple[int, ...], int], ...]  # sorted (vector, mult)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def as_dict(self) -> dict[tuple[int, ...], int]:
        return dict(self.counts)

    def total(self) -> int:
        return sum(m for _, m in self.counts)

    def to_json(self) -> dict:
        return {
            "basis": list(self.basis),
            "vectors": [
                {"pattern": "".join(map(str, vec)), "multiplicity": m}
                for vec, m in self.counts
            ],
        }


def _make_shadow(basis: Sequence[int], hist: Counter) -> ShadowMultiset:
    counts = tuple(sorted((vec, m) for vec, m in hist.items() if m > 0))
    return ShadowMultiset(tuple(basis), counts)


def shadow(
    g: Graph, w: Sequence[int], l: int, empty_counts_all_b: bool = False
) -> ShadowMultiset:
    """The l-shadow of W: for each u in {0,1}^{W_A}, u appears min(k, l)
    times where k counts columns of B \\ W_B realizing u against W_A.

    For W_A empty the shadow is min(|B \\ W_B|, l) null vectors; with
    empty_counts_all_b it is min(|B|, l) instead.
    """
    if not g.bipartite:
        raise GraphError("shadow needs a bipartition")
    if l < 1:
        raise GraphError(f"multiplicity must be >= 1, got {l}")
    wa, wb = _split_played(g, w)
    wb_set = set(wb)
    remaining = [b for b in g.b_vertices if b not in wb_set]
    if not wa:
        pool = len(g.part_b) if empty_counts_all_b else len(remaining)
        count = min(pool, l)
        hist = Counter({(): count}) if count > 0 else Counter()
        return _make_shadow([], hist)
    raw = Counter(tuple(int(g.adjacent(a, b)) for a in wa) for b in remaining)
    hist = Counter({vec: min(k, l) for vec, k in raw.items()})
    return _make_shadow(wa, hist)


def shadows_equal(
    s1: ShadowMultiset,
    s2: ShadowMultiset,
    correspondence: Sequence[int] | None = None,
) -> bool:
    """True iff multiplicities agree for every vector after reindexing
    s1's basis positions by ``correspondence`` (identity when omitted)."""
    if s1.dimension != s2.dimension:
        raise GraphError(
            f"dimension mismatch: {s1.dimension} vs {s2.dimension}"
        )
    if correspondence is None:
        correspondence = range(s1.dimension)
    perm = list(correspondence)
    if sorted(perm) != list(range(s1.dimension)):
        raise GraphError("correspondence is not a basis bijection")
    remapped = Counter()
    for vec, m in s1.counts:
        out = [0] * len(vec)
        for i, p in enumerate(perm):
            out[p] = vec[i]
        remapped[tuple(out)] += m
    return remapped == Counter(dict(s2.counts))


def graph_to_text(g: Graph) -> str:
    edges = g.edges()
    lines = [f"{g.n} {len(edges)}"]
    lines += [f"{u} {v}" for u, v in edges]
    return "\n".join(lines) + "\n"


def load_graph(path: str) -> Graph:
    """Load a graph from JSON (by extension) or edge-list text."""
    with open(path) as fh:
        text = fh.read()
    if path.endswith(".json"):
        return Graph.from_json(json.loads(text))
    return Graph.from_edge_list_text(text)
