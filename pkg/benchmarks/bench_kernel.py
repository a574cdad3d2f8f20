"""Compare the compiled evaluation kernel against the pure-Python
fallback on representative workloads.

Usage: python3 benchmarks/bench_kernel.py [--repeat N]
"""

import argparse
import time

import numpy as np

from folim import _pykernel
from folim._compile import GraphBits, compile_formula
from folim.formula import parse_formula
from folim.graph import generate_hn

try:
    from folim import _ckernel
except ImportError:
    _ckernel = None

WORKLOADS = [
    ("count_all k=1, depth 1, H_6", "exists x2. adj(x1,x2)", 6, "count", 1),
    ("count_all k=2, depth 0, H_4", "adj(x1,x2)", 4, "count", 2),
    ("sentence depth 2, H_4", "forall x1. exists x2. adj(x1,x2)", 4, "count", 0),
    ("batch 20k k=1, depth 1, H_6", "exists x2. adj(x1,x2)", 6, "batch", 1),
]


def run(kernel, prog, gb, mode, k, n):
    if mode == "count":
        return kernel.count_all(prog, gb, k)
    rng = np.random.default_rng(0)
    asg = rng.integers(0, n, size=(20_000, k), dtype=np.int32)
    return int(kernel.eval_batch(prog, gb, asg).sum())


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    if _ckernel is None:
        print("compiled kernel unavailable; showing pure-Python only")

    print(f"{'workload':<34} {'python':>10} {'cython':>10} {'speedup':>8}")
    for name, text, hn, mode, k in WORKLOADS:
        g = generate_hn(hn)
        gb = GraphBits.from_graph(g)
        prog = compile_formula(parse_formula(text))
        times = {}
        for label, kernel in (("python", _pykernel), ("cython", _ckernel)):
            if kernel is None:
                continue
            best, result = None, None
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                result = run(kernel, prog, gb, mode, k, g.n)
                dt = time.perf_counter() - t0
                best = dt if best is None else min(best, dt)
            times[label] = (best, result)
        py = times["python"]
        if "cython" in times:
            cy = times["cython"]
            assert py[1] == cy[1], f"backend mismatch on {name}"
            print(f"{name:<34} {py[0]:>9.4f}s {cy[0]:>9.4f}s {py[0] / cy[0]:>7.1f}x")
        else:
            print(f"{name:<34} {py[0]:>9.4f}s {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
