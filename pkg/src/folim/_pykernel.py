"""Pure-Python evaluation kernel. Semantics must stay bit-identical to the
compiled kernel in _ckernel.pyx; the backend is chosen in _kernel.py."""

from __future__ import annotations

import numpy as np

from ._compile import (
    ADJ,
    AND,
    EQ,
    EXISTS,
    FALSE,
    FORALL,
    IMPLIES,
    NOT,
    OR,
    TRUE,
    CompiledFormula,
    GraphBits,
)

BACKEND = "python"


class EvalError(Exception):
    pass


def _resolve(code: int, env, roots) -> int:
    if code >= 0:
        v = env[code]
        if v < 0:
            raise EvalError(f"variable x{code + 1} is not assigned")
        return v
    j = -code
    if j > len(roots):
        raise EvalError(f"root r{j} out of range ({len(roots)} roots)")
    return int(roots[j - 1])


def _eval(prog: CompiledFormula, gb: GraphBits, idx: int, env, memo) -> bool:
    op = prog.op[idx]
    if op == TRUE:
        return True
    if op == FALSE:
        return False
    if op == ADJ or op == EQ:
        u = _resolve(prog.a1[idx], env, gb.roots)
        v = _resolve(prog.a2[idx], env, gb.roots)
        if op == EQ:
            return u == v
        return bool(int(gb.words[u, v >> 6]) >> (v & 63) & 1)
    if op == NOT:
        return not _eval(prog, gb, prog.a1[idx], env, memo)
    if op == AND:
        start, count = prog.a1[idx], prog.a2[idx]
        return all(
            _eval(prog, gb, prog.children[start + i], env, memo)
            for i in range(count)
        )
    if op == OR:
        start, count = prog.a1[idx], prog.a2[idx]
        return any(
            _eval(prog, gb, prog.children[start + i], env, memo)
            for i in range(count)
        )
    if op == IMPLIES:
        if not _eval(prog, gb, prog.a1[idx], env, memo):
            return True
        return _eval(prog, gb, prog.a2[idx], env, memo)
    # quantifier: memo on the values of the node's free slots
    slot = prog.a1[idx]
    body = prog.a2[idx]
    key = None
    if memo is not None:
        key = (idx, tuple(env))
        hit = memo.get(key)
        if hit is not None:
            return hit
    saved = env[slot]
    result = op == FORALL
    for v in range(gb.n):
        env[slot] = v
        val = _eval(prog, gb, body, env, memo)
        if op == EXISTS and val:
            result = True
            break
        if op == FORALL and not val:
            result = False
            break
    env[slot] = saved
    if memo is not None:
        memo[key] = result
    return result


def eval_env(prog: CompiledFormula, gb: GraphBits, env) -> bool:
    """Evaluate with env[i] = value of x_{i+1} (-1 for unset)."""
    return _eval(prog, gb, prog.root, list(env), None)


def count_all(prog: CompiledFormula, gb: GraphBits, k: int) -> int:
    """Number of satisfying assignments over all n^k tuples for slots 0..k-1."""
    env = [-1] * max(prog.nslots, k)
    memo: dict = {}
    n = gb.n
    if k == 0:
        return int(_eval(prog, gb, prog.root, env, memo))
    count = 0
    tup = [0] * k
    while True:
        for i in range(k):
            env[i] = tup[i]
        if _eval(prog, gb, prog.root, env, memo):
            count += 1
        pos = k - 1
        while pos >= 0:
            tup[pos] += 1
            if tup[pos] < n:
                break
            tup[pos] = 0
            pos -= 1
        if pos < 0:
            return count


def eval_batch(
    prog: CompiledFormula, gb: GraphBits, assignments: np.ndarray
) -> np.ndarray:
    """Per-row truth values for an (m, k) array of assignments."""
    m, k = assignments.shape
    out = np.zeros(m, dtype=np.uint8)
    env = [-1] * max(prog.nslots, k)
    for r in range(m):
        for i in range(k):
            env[i] = int(assignments[r, i])
        out[r] = _eval(prog, gb, prog.root, env, None)
    return out
