"""First-order model checking on finite graphs and Stone pairings.

The Stone pairing <psi, G> of a formula with k free variables is the
probability that a uniformly chosen k-tuple of vertices (with repetition)
satisfies it. Exact values are rationals; sampled values carry a
two-sided Hoeffding radius.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np

from . import _kernel
from ._compile import GraphBits, compile_formula
from ._kernel import EvalError
from .formula import Formula, free_variables, root_indices, threshold_bounds
from .graph import Graph

EXACT_BUDGET = 10**8  # max tuple count for exhaustive enumeration


class PairingError(Exception):
    pass


def _graph_bits(g: Graph) -> GraphBits:
    return GraphBits.from_graph(g)


def _check_roots(g: Graph, f: Formula) -> None:
    ri = root_indices(f)
    if ri and max(ri) > len(g.roots):
        raise EvalError(
            f"formula uses root r{max(ri)} but graph has {len(g.roots)} roots"
        )


def satisfies(g: Graph, f: Formula, asg: Mapping[int, int]) -> bool:
    """Tarskian truth of f on g under the given free-variable assignment."""
    _check_roots(g, f)
    fv = free_variables(f)
    missing = fv - set(asg)
    if missing:
        raise EvalError(f"unmapped variables: {sorted(missing)}")
    for i, v in asg.items():
        if not 0 <= v < g.n:
            raise EvalError(f"x{i} = {v} out of range")
    prog = compile_formula(f)
    size = max(prog.nslots, max(asg, default=0))
    env = [-1] * size
    for i, v in asg.items():
        env[i - 1] = v
    return _kernel.eval_env(prog, _graph_bits(g), env)


def _contiguous_k(f: Formula) -> int:
    fv = free_variables(f)
    if not fv:
        return 0
    k = max(fv)
    if fv != frozenset(range(1, k + 1)):
        raise PairingError(
            f"free variables must be contiguous x1..xk, got {sorted(fv)}"
        )
    return k


def stone_pairing_exact(
    g: Graph, f: Formula, budget: int = EXACT_BUDGET, distinct: bool = False
) -> Fraction:
    """Exact Stone pairing: satisfying k-tuples / n^k.

    ``distinct`` switches to tuples without repetition (denominator
    n(n-1)...(n-k+1)), the sensitivity toggle for the sampling convention.
    """
    _check_roots(g, f)
    k = _contiguous_k(f)
    if g.n == 0:
        raise PairingError("empty graph")
    if g.n**k > budget:
        raise PairingError(f"{g.n}^{k} tuples exceed budget {budget}")
    prog = compile_formula(f)
    gb = _graph_bits(g)
    if k == 0:
        return Fraction(_kernel.count_all(prog, gb, 0))
    if not distinct:
        return Fraction(_kernel.count_all(prog, gb, k), g.n**k)
    count = 0
    denom = math.perm(g.n, k)
    if denom == 0:
        raise PairingError(f"no {k}-tuples of distinct vertices in a graph on {g.n}")
    import itertools

    for tup in itertools.permutations(range(g.n), k):
        if satisfies(g, f, {i + 1: v for i, v in enumerate(tup)}):
            count += 1
    return Fraction(count, denom)


@dataclass(frozen=True)
class PairingEstimate:
    """Monte Carlo pairing estimate with a two-sided Hoeffding radius."""

    estimate: float
    samples: int
    radius: float
    seed: int
    confidence: float

    def to_json(self) -> dict:
        return {
            "value": self.estimate,
            "exact": False,
            "samples": self.samples,
            "radius": self.radius,
            "seed": self.seed,
        }


def hoeffding_radius(samples: int, confidence: float) -> float:
    """Two-sided radius sqrt(ln(2/delta) / (2N)) at confidence 1-delta."""
    delta = 1.0 - confidence
    return math.sqrt(math.log(2.0 / delta) / (2.0 * samples))


def _draw_assignments(
    rng: random.Random, n: int, k: int, count: int, distinct: bool
) -> np.ndarray:
    out = np.empty((count, k), dtype=np.int64)
    for r in range(count):
        if distinct:
            tup = rng.sample(range(n), k)
        else:
            tup = [rng.randrange(n) for _ in range(k)]
        out[r] = tup
    return out


def stone_pairing_mc(
    g: Graph,
    f: Formula,
    samples: int,
    seed: int,
    confidence: float = 0.99,
    distinct: bool = False,
) -> PairingEstimate:
    """Sampled Stone pairing over independent uniform k-tuples."""
    if samples < 1:
        raise PairingError("need at least one sample")
    _check_roots(g, f)
    k = _contiguous_k(f)
    prog = compile_formula(f)
    gb = _graph_bits(g)
    if k == 0:
        value = float(_kernel.count_all(prog, gb, 0))
        return PairingEstimate(
            value, samples, hoeffding_radius(samples, confidence), seed, confidence
        )
    rng = random.Random(seed)
    asg = _draw_assignments(rng, g.n, k, samples, distinct)
    hits = _kernel.eval_batch(prog, gb, asg)
    return PairingEstimate(
        float(int(hits.sum())) / samples,
        samples,
        hoeffding_radius(samples, confidence),
        seed,
        confidence,
    )


def stone_threshold_mc(
    g: Graph,
    f: Formula,
    n: int,
    a,
    b,
    groups: int,
    seed: int,
    confidence: float = 0.99,
) -> PairingEstimate:
    """Sampled pairing of the count-threshold formula, evaluated
    semantically: each trial draws n k-tuples and succeeds iff the number
    of satisfiers lands in the clamped threshold interval."""
    if groups < 1:
        raise PairingError("need at least one group")
    if a > b:
        raise PairingError(f"empty interval: a={a} > b={b}")
    _check_roots(g, f)
    k = _contiguous_k(f)
    if k == 0:
        raise PairingError("threshold evaluation needs free variables")
    lo, hi = threshold_bounds(n, a, b)
    prog = compile_formula(f)
    gb = _graph_bits(g)
    rng = random.Random(seed)
    asg = _draw_assignments(rng, g.n, k, groups * n, False)
    hits = _kernel.eval_batch(prog, gb, asg).reshape(groups, n)
    counts = hits.sum(axis=1)
    successes = int(((counts >= lo) & (counts <= hi)).sum())
    return PairingEstimate(
        successes / groups,
        groups,
        hoeffding_radius(groups, confidence),
        seed,
        confidence,
    )


def pairing_to_json(value) -> dict:
    """Serialize an exact Fraction or a PairingEstimate uniformly."""
    if isinstance(value, PairingEstimate):
        return value.to_json()
    return {
        "value": f"{value.numerator}/{value.denominator}",
        "exact": True,
        "samples": None,
        "radius": 0.0,
        "seed": None,
    }
