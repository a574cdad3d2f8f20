# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled evaluation kernel. Mirrors _pykernel exactly; selected in
_kernel.py when the extension built."""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"

from ._pykernel import EvalError

cdef enum:
    ADJ = 0
    EQ = 1
    TRUE = 2
    FALSE = 3
    NOT = 4
    AND = 5
    OR = 6
    IMPLIES = 7
    EXISTS = 8
    FORALL = 9


cdef int _resolve(int code, long long[::1] env, long long[::1] roots) except -2:
    cdef int j
    if code >= 0:
        if env[code] < 0:
            raise EvalError(f"variable x{code + 1} is not assigned")
        return <int>env[code]
    j = -code
    if j > roots.shape[0]:
        raise EvalError(f"root r{j} out of range ({roots.shape[0]} roots)")
    return <int>roots[j - 1]


cdef int _eval(
    int idx,
    int[::1] op,
    int[::1] a1,
    int[::1] a2,
    int[::1] children,
    cnp.uint64_t[:, ::1] words,
    long long[::1] roots,
    long long[::1] env,
    int n,
) except -1:
    cdef int o = op[idx]
    cdef int u, v, i, start, count, slot, body, val
    cdef long long saved
    if o == TRUE:
        return 1
    if o == FALSE:
        return 0
    if o == ADJ or o == EQ:
        u = _resolve(a1[idx], env, roots)
        v = _resolve(a2[idx], env, roots)
        if o == EQ:
            return 1 if u == v else 0
        return <int>((words[u, v >> 6] >> (v & 63)) & 1)
    if o == NOT:
        return 1 - _eval(a1[idx], op, a1, a2, children, words, roots, env, n)
    if o == AND:
        start = a1[idx]
        count = a2[idx]
        for i in range(count):
            if not _eval(children[start + i], op, a1, a2, children, words, roots, env, n):
                return 0
        return 1
    if o == OR:
        start = a1[idx]
        count = a2[idx]
        for i in range(count):
            if _eval(children[start + i], op, a1, a2, children, words, roots, env, n):
                return 1
        return 0
    if o == IMPLIES:
        if not _eval(a1[idx], op, a1, a2, children, words, roots, env, n):
            return 1
        return _eval(a2[idx], op, a1, a2, children, words, roots, env, n)
    # quantifier
    slot = a1[idx]
    body = a2[idx]
    saved = env[slot]
    cdef int result = 1 if o == FORALL else 0
    for v in range(n):
        env[slot] = v
        val = _eval(body, op, a1, a2, children, words, roots, env, n)
        if o == EXISTS and val:
            result = 1
            break
        if o == FORALL and not val:
            result = 0
            break
    env[slot] = saved
    return result


cdef tuple _unpack(prog):
    return (prog.op, prog.a1, prog.a2,
            np.ascontiguousarray(prog.children, dtype=np.int32))


def eval_env(prog, gb, env):
    cdef int k = len(env)
    cdef int size = max(prog.nslots, k)
    envarr = np.full(max(size, 1), -1, dtype=np.int64)
    for i, v in enumerate(env):
        envarr[i] = v
    op, a1, a2, children = _unpack(prog)
    roots = np.ascontiguousarray(gb.roots, dtype=np.int64)
    return bool(
        _eval(prog.root, op, a1, a2, children, gb.words, roots, envarr, gb.n)
    )


def count_all(prog, gb, int k):
    cdef int n = gb.n
    op, a1, a2, children = _unpack(prog)
    roots = np.ascontiguousarray(gb.roots, dtype=np.int64)
    cdef long long[::1] env = np.full(max(prog.nslots, k, 1), -1, dtype=np.int64)
    cdef int[::1] opv = op
    cdef int[::1] a1v = a1
    cdef int[::1] a2v = a2
    cdef int[::1] chv = children
    cdef cnp.uint64_t[:, ::1] wv = gb.words
    cdef long long[::1] rv = roots
    cdef int rootidx = prog.root
    cdef long long count = 0
    cdef int pos, i
    if k == 0:
        return int(_eval(rootidx, opv, a1v, a2v, chv, wv, rv, env, n))
    tup = np.zeros(k, dtype=np.int64)
    cdef long long[::1] tv = tup
    for i in range(k):
        env[i] = 0
    while True:
        if _eval(rootidx, opv, a1v, a2v, chv, wv, rv, env, n):
            count += 1
        pos = k - 1
        while pos >= 0:
            tv[pos] += 1
            if tv[pos] < n:
                break
            tv[pos] = 0
            pos -= 1
        if pos < 0:
            return int(count)
        for i in range(k):
            env[i] = tv[i]


def eval_batch(prog, gb, cnp.ndarray assignments):
    cdef int n = gb.n
    asg = np.ascontiguousarray(assignments, dtype=np.int64)
    cdef long long[:, ::1] av = asg
    cdef int m = av.shape[0]
    cdef int k = av.shape[1]
    op, a1, a2, children = _unpack(prog)
    roots = np.ascontiguousarray(gb.roots, dtype=np.int64)
    out = np.zeros(m, dtype=np.uint8)
    cdef cnp.uint8_t[::1] ov = out
    cdef long long[::1] env = np.full(max(prog.nslots, k, 1), -1, dtype=np.int64)
    cdef int[::1] opv = op
    cdef int[::1] a1v = a1
    cdef int[::1] a2v = a2
    cdef int[::1] chv = children
    cdef cnp.uint64_t[:, ::1] wv = gb.words
    cdef long long[::1] rv = roots
    cdef int rootidx = prog.root
    cdef int r, i
    for r in range(m):
        for i in range(k):
            env[i] = av[r, i]
        ov[r] = _eval(rootidx, opv, a1v, a2v, chv, wv, rv, env, n)
    return out
