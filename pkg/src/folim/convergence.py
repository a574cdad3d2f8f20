"""Stone-pairing trajectories, dyadic intervals, root search, the
shadow-probability experiment and the counterexample report for the H_n
family (rooted pairings stay below 1/2 while the limit object's value
for "adjacent to the root" is 2/3)."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .evaluate import (
    PairingEstimate,
    hoeffding_radius,
    stone_pairing_exact,
    stone_pairing_mc,
)
from .formula import Formula, FormulaFamily, free_variables
from .graph import CapExceeded, Graph, GraphError, generate_hn, shadow

MODELING_ROOTED_VALUE = Fraction(2, 3)  # neighborhood measure of a B-root
COUNTEREXAMPLE_GAP = Fraction(1, 10)


class ConvergenceError(Exception):
    pass


@dataclass(frozen=True)
class Interval:
    lower: Fraction
    upper: Fraction

    def __post_init__(self):
        if self.lower > self.upper:
            raise ConvergenceError(f"empty interval [{self.lower}, {self.upper}]")

    def contains(self, x) -> bool:
        return self.lower <= x <= self.upper

    def width(self) -> Fraction:
        return self.upper - self.lower


def dyadic_interval(x, k: int) -> Interval:
    """The order-k dyadic interval [a*2^-k, (a+1)*2^-k] containing x;
    x = 1 clamps to the top interval."""
    xf = Fraction(x)
    if not 0 <= xf <= 1:
        raise ConvergenceError(f"x = {x} outside [0, 1]")
    a = min(math.floor(xf * (1 << k)), (1 << k) - 1)
    return Interval(Fraction(a, 1 << k), Fraction(a + 1, 1 << k))


def eps_far(x, j: Interval, eps) -> bool:
    """True iff every point of j is at distance >= eps from x."""
    xf = Fraction(x)
    dist = max(j.lower - xf, xf - j.upper, Fraction(0))
    return dist >= Fraction(eps)


@dataclass(frozen=True)
class TrajectoryPoint:
    label: int  # sequence index (e.g. the n of H_n)
    values: tuple  # per-formula Fraction or PairingEstimate


@dataclass(frozen=True)
class Trajectory:
    family: FormulaFamily
    points: tuple[TrajectoryPoint, ...]
    descriptor: str

    def value(self, point: TrajectoryPoint, i: int) -> float:
        v = point.values[i]
        return v.estimate if isinstance(v, PairingEstimate) else float(v)

    def to_csv(self) -> str:
        lines = ["n,formula,value,radius"]
        for pt in self.points:
            for i, v in enumerate(pt.values):
                if isinstance(v, PairingEstimate):
                    lines.append(f"{pt.label},{i},{v.estimate},{v.radius}")
                else:
                    lines.append(f"{pt.label},{i},{float(v)},0.0")
        return "\n".join(lines) + "\n"


def trajectory(
    family: FormulaFamily,
    sequence: Sequence[tuple[int, Graph]],
    mode: str = "exact",
    samples: int = 10000,
    seed: int = 0,
    budget: int | None = None,
) -> Trajectory:
    """Pairings of every family member along a graph sequence."""
    labels = [n for n, _ in sequence]
    if any(b <= a for a, b in zip(labels, labels[1:])):
        raise ConvergenceError("sequence labels must be strictly increasing")
    points = []
    for idx, (n, g) in enumerate(sequence):
        vals = []
        for f in family:
            if mode == "exact":
                kwargs = {"budget": budget} if budget else {}
                vals.append(stone_pairing_exact(g, f, **kwargs))
            else:
                vals.append(stone_pairing_mc(g, f, samples, seed + idx))
        points.append(TrajectoryPoint(n, tuple(vals)))
    return Trajectory(family, tuple(points), descriptor="explicit")


def hn_sequence(n_lo: int, n_hi: int) -> list[tuple[int, Graph]]:
    return [(n, generate_hn(n)) for n in range(n_lo, n_hi + 1)]


def estimate_limit(t: Trajectory, tol) -> list:
    """Finite Cauchy proxy: per formula, the final value when the last
    three points move by <= tol, else None."""
    if len(t.points) < 3:
        raise ConvergenceError("need at least 3 trajectory points")
    out = []
    tail = t.points[-3:]
    for i in range(len(t.family)):
        vals = [t.value(pt, i) for pt in tail]
        diffs = [abs(b - a) for a, b in zip(vals, vals[1:])]
        out.append(vals[-1] if all(d <= tol for d in diffs) else None)
    return out


@dataclass(frozen=True)
class RootSearchResult:
    roots: tuple[int, ...]
    deviations: tuple[Fraction, ...]
    delta: Fraction  # max deviation over the family
    mode: str  # "exhaustive" | "sampled"

    def to_json(self) -> dict:
        return {
            "roots": list(self.roots),
            "deviations": [float(d) for d in self.deviations],
            "delta": float(self.delta),
            "mode": self.mode,
        }


def _root_deviation(g: Graph, family: FormulaFamily, targets, roots):
    rooted = g.with_roots(roots)
    devs = tuple(
        abs(stone_pairing_exact(rooted, f) - Fraction(t))
        for f, t in zip(family, targets)
    )
    return devs, max(devs, default=Fraction(0))


def find_roots(
    g: Graph,
    family: FormulaFamily,
    targets: Sequence,
    m: int,
    budget: int = 10**6,
    seed: int = 0,
    samples: int = 1000,
) -> RootSearchResult:
    """Search for the m-tuple of roots minimizing the worst per-formula
    pairing deviation from the targets; exhaustive when n^m fits the
    budget, best-of-sampled otherwise. Ties break on the lowest tuple."""
    if len(targets) != len(family):
        raise ConvergenceError(
            f"{len(family)} formulas but {len(targets)} targets"
        )
    if m == 0:
        devs, delta = _root_deviation(g, family, targets, ())
        return RootSearchResult((), devs, delta, "exhaustive")
    exhaustive = g.n**m <= budget
    if exhaustive:
        candidates = itertools.product(range(g.n), repeat=m)
        mode = "exhaustive"
    else:
        rng = random.Random(seed)
        candidates = (
            tuple(rng.randrange(g.n) for _ in range(m)) for _ in range(samples)
        )
        mode = "sampled"
    best = None
    for tup in candidates:
        devs, delta = _root_deviation(g, family, targets, tup)
        if best is None or delta < best[2]:
            best = (tuple(tup), devs, delta)
    return RootSearchResult(best[0], best[1], best[2], mode)


@dataclass(frozen=True)
class CounterexampleRow:
    n: int
    max_rooted: Fraction  # max over roots of <adj(x1,r1), H_n rooted>
    below_half: bool
    gap_to_modeling: Fraction

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "max_rooted": f"{self.max_rooted.numerator}/{self.max_rooted.denominator}",
            "value": float(self.max_rooted),
            "below_half": self.below_half,
            "gap_to_modeling": float(self.gap_to_modeling),
        }


@dataclass(frozen=True)
class CounterexampleReport:
    rows: tuple[CounterexampleRow, ...]
    modeling_value: Fraction
    verdict: str

    def to_json(self) -> dict:
        return {
            "rows": [r.to_json() for r in self.rows],
            "modeling_value": float(self.modeling_value),
            "verdict": self.verdict,
        }

    def to_text(self) -> str:
        lines = [f"{'n':>3}  {'max rooted <psi0>':>20}  {'<= 1/2':>7}  {'gap to 2/3':>11}"]
        for r in self.rows:
            frac = f"{r.max_rooted.numerator}/{r.max_rooted.denominator}"
            lines.append(
                f"{r.n:>3}  {frac + ' = %.5f' % float(r.max_rooted):>20}  "
                f"{str(r.below_half).lower():>7}  {float(r.gap_to_modeling):>11.5f}"
            )
        lines.append(f"modeling value for psi0 at a B-root: 2/3")
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines) + "\n"


def counterexample_report(n_lo: int, n_hi: int) -> CounterexampleReport:
    """Per n, the exact maximum over roots of the rooted pairing of
    "x1 adjacent to the root" on H_n. The rooted pairing at root v is
    deg(v)/|V|, so the maximum is the B-degree 2^(n-1)*n over n*2^n + n;
    this is cross-checked against full formula evaluation in the tests."""
    rows = []
    for n in range(n_lo, n_hi + 1):
        g = generate_hn(n)
        best = max(Fraction(g.degree(v), g.n) for v in range(g.n))
        rows.append(
            CounterexampleRow(
                n,
                best,
                best <= Fraction(1, 2),
                MODELING_ROOTED_VALUE - best,
            )
        )
    ok = all(r.below_half for r in rows) and all(
        r.gap_to_modeling > COUNTEREXAMPLE_GAP for r in rows
    )
    verdict = "counterexample reproduced" if ok else "counterexample NOT reproduced"
    return CounterexampleReport(tuple(rows), MODELING_ROOTED_VALUE, verdict)


def _tuple_qualifies(g: Graph, tup: Sequence[int], l: int) -> bool:
    """p distinct A-vertices whose l-shadow holds every vector of
    {0,1}^p with multiplicity exactly l."""
    if len(set(tup)) != len(tup):
        return False
    if any(v not in g.part_a for v in tup):
        return False
    s = shadow(g, list(tup), l)
    counts = s.as_dict()
    if len(counts) != 1 << len(tup):
        return False
    return all(m == l for m in counts.values())


def tuple_shadow_probability(
    n: int,
    p: int,
    l: int,
    mode: str = "exact",
    budget: int = 10**6,
    samples: int = 10**5,
    seed: int = 0,
):
    """Probability that a uniform p-tuple of H_n vertices consists of p
    distinct A-vertices with a complete multiplicity-l shadow. Exact mode
    returns a Fraction, mc mode a PairingEstimate."""
    g = generate_hn(n)
    if p == 0:
        # empty tuple: the required min(|B|, l) null vectors exist iff l <= n
        return Fraction(1) if l <= n else Fraction(0)
    if mode == "exact":
        if g.n**p > budget:
            raise ConvergenceError(f"{g.n}^{p} tuples exceed budget {budget}")
        hits = sum(
            _tuple_qualifies(g, tup, l)
            for tup in itertools.product(range(g.n), repeat=p)
        )
        return Fraction(hits, g.n**p)
    rng = random.Random(seed)
    hits = 0
    for _ in range(samples):
        tup = [rng.randrange(g.n) for _ in range(p)]
        hits += _tuple_qualifies(g, tup, l)
    return PairingEstimate(
        hits / samples, samples, hoeffding_radius(samples, 0.99), seed, 0.99
    )
