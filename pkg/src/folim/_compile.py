"""Shared lowering of formula ASTs to the flat instruction form consumed by
both evaluation kernels (compiled and pure Python).

Node encoding (parallel int32 arrays op/a1/a2):
  ADJ, EQ      a1, a2 = term codes: variable x_i -> i-1, root r_j -> -j
  TRUE, FALSE  no args
  NOT          a1 = child node
  AND, OR      a1 = start offset into ``children``, a2 = child count
  IMPLIES      a1, a2 = child nodes
  EXISTS, FORALL  a1 = environment slot (i-1), a2 = body node

The root node is the last entry. Environment slots hold vertex ids; slot
i-1 carries the value of x_i.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .formula import (
    Adj,
    And,
    Eq,
    Exists,
    FalseF,
    Forall,
    Formula,
    Implies,
    Not,
    Or,
    Root,
    TrueF,
    Var,
)

ADJ, EQ, TRUE, FALSE, NOT, AND, OR, IMPLIES, EXISTS, FORALL = range(10)


@dataclass(frozen=True)
class CompiledFormula:
    op: np.ndarray  # int32
    a1: np.ndarray  # int32
    a2: np.ndarray  # int32
    children: np.ndarray  # int32
    root: int
    nslots: int  # environment size = max variable index


def _term_code(t) -> int:
    return t.index - 1 if isinstance(t, Var) else -t.index


def compile_formula(f: Formula) -> CompiledFormula:
    op: list[int] = []
    a1: list[int] = []
    a2: list[int] = []
    children: list[int] = []
    max_var = 0

    def emit(o: int, x: int = 0, y: int = 0) -> int:
        op.append(o)
        a1.append(x)
        a2.append(y)
        return len(op) - 1

    def walk(f: Formula) -> int:
        nonlocal max_var
        match f:
            case Adj(l, r) | Eq(l, r):
                for t in (l, r):
                    if isinstance(t, Var):
                        max_var = max(max_var, t.index)
                o = ADJ if isinstance(f, Adj) else EQ
                return emit(o, _term_code(l), _term_code(r))
            case TrueF():
                return emit(TRUE)
            case FalseF():
                return emit(FALSE)
            case Not(child):
                c = walk(child)
                return emit(NOT, c)
            case And(parts) | Or(parts):
                idxs = [walk(c) for c in parts]
                start = len(children)
                children.extend(idxs)
                o = AND if isinstance(f, And) else OR
                return emit(o, start, len(idxs))
            case Implies(left, right):
                cl = walk(left)
                cr = walk(right)
                return emit(IMPLIES, cl, cr)
            case Exists(v, body) | Forall(v, body):
                max_var = max(max_var, v)
                c = walk(body)
                o = EXISTS if isinstance(f, Exists) else FORALL
                return emit(o, v - 1, c)
        raise TypeError(f"not a formula: {f!r}")

    root = walk(f)
    return CompiledFormula(
        op=np.array(op, dtype=np.int32),
        a1=np.array(a1, dtype=np.int32),
        a2=np.array(a2, dtype=np.int32),
        children=np.array(children, dtype=np.int32),
        root=root,
        nslots=max_var,
    )


@dataclass(frozen=True)
class GraphBits:
    """Bit-packed adjacency plus roots, the kernel-facing graph view."""

    n: int
    words: np.ndarray  # uint64, shape (n, ceil(n/64))
    roots: np.ndarray  # int64

    @staticmethod
    def from_graph(g) -> "GraphBits":
        nwords = max(1, (g.n + 63) // 64)
        words = np.zeros((g.n, nwords), dtype=np.uint64)
        for v in range(g.n):
            mask = g.adj[v]
            for w in range(nwords):
                words[v, w] = (mask >> (64 * w)) & 0xFFFFFFFFFFFFFFFF
        return GraphBits(
            g.n, words, np.array(g.roots, dtype=np.int64)
        )
