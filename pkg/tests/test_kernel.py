"""Backend parity: the compiled kernel and the pure-Python fallback must
produce bit-identical results on the same inputs."""

import random

import numpy as np
import pytest

from folim import _pykernel
from folim._compile import GraphBits, compile_formula
from folim._kernel import BACKEND
from folim.formula import parse_formula
from folim.graph import generate_hn, make_graph

ckernel = pytest.importorskip("folim._ckernel")

FORMULAS = [
    ("adj(x1,x2)", 2),
    ("exists x2. adj(x1,x2)", 1),
    ("forall x1. exists x2. adj(x1,x2) & !(x1 = x2)", 0),
    ("adj(x1,x2) -> (exists x3. adj(x2,x3) | x3 = x1)", 2),
]


def _graphs():
    rng = random.Random(5)
    out = [generate_hn(2)]
    for n in (3, 5, 8):
        edges = [
            (u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.4
        ]
        out.append(make_graph(n, edges))
    return out


def test_count_all_parity():
    for g in _graphs():
        gb = GraphBits.from_graph(g)
        for text, k in FORMULAS:
            prog = compile_formula(parse_formula(text))
            assert ckernel.count_all(prog, gb, k) == _pykernel.count_all(
                prog, gb, k
            ), (text, g.n)


def test_eval_env_parity():
    rng = random.Random(9)
    for g in _graphs():
        gb = GraphBits.from_graph(g)
        for text, k in FORMULAS:
            prog = compile_formula(parse_formula(text))
            for _ in range(20):
                env = [rng.randrange(g.n) for _ in range(max(prog.nslots, 1))]
                assert ckernel.eval_env(prog, gb, env) == _pykernel.eval_env(
                    prog, gb, env
                )


def test_eval_batch_parity():
    rng = random.Random(3)
    g = generate_hn(2)
    gb = GraphBits.from_graph(g)
    prog = compile_formula(parse_formula("exists x2. adj(x1,x2)"))
    asg = np.array(
        [[rng.randrange(g.n)] for _ in range(500)], dtype=np.int32
    )
    a = ckernel.eval_batch(prog, gb, asg)
    b = _pykernel.eval_batch(prog, gb, asg)
    assert np.array_equal(a, b)


def test_rooted_parity():
    g = generate_hn(2).with_roots([8, 9])
    gb = GraphBits.from_graph(g)
    prog = compile_formula(parse_formula("adj(x1,r1) | x1 = r2"))
    for v in range(g.n):
        assert ckernel.eval_env(prog, gb, [v]) == _pykernel.eval_env(prog, gb, [v])


def test_selected_backend_reported():
    assert BACKEND in ("cython", "python")


def test_env_var_forces_pure_python():
    import subprocess
    import sys

    out = subprocess.run(
        [sys.executable, "-c", "from folim._kernel import BACKEND; print(BACKEND)"],
        env={"PATH": "/usr/bin:/bin", "FOLIM_PURE_PYTHON": "1"},
        capture_output=True,
        text=True,
    )
    assert out.stdout.strip() == "python"
