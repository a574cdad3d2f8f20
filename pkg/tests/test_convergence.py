from fractions import Fraction

import pytest

from folim.convergence import (
    ConvergenceError,
    counterexample_report,
    dyadic_interval,
    eps_far,
    estimate_limit,
    find_roots,
    hn_sequence,
    trajectory,
    tuple_shadow_probability,
)
from folim.evaluate import PairingEstimate
from folim.formula import family_from_lines
from folim.graph import generate_hn


def test_dyadic_interval():
    j = dyadic_interval(Fraction(3, 8), 2)
    assert (j.lower, j.upper) == (Fraction(1, 4), Fraction(1, 2))
    # x = 1 falls in the top interval, not past it
    j = dyadic_interval(1, 3)
    assert (j.lower, j.upper) == (Fraction(7, 8), Fraction(1))
    with pytest.raises(ConvergenceError):
        dyadic_interval(2, 1)


def test_eps_far_boundary():
    j = dyadic_interval(Fraction(1, 4), 2)  # [1/4, 1/2]
    assert eps_far(Fraction(3, 4), j, Fraction(1, 4))
    assert not eps_far(Fraction(3, 4), j, Fraction(3, 10))
    assert not eps_far(Fraction(3, 8), j, Fraction(1, 100))


def test_trajectory_exact_values():
    fam = family_from_lines(["exists x2. adj(x1,x2)"])
    t = trajectory(fam, hn_sequence(2, 5))
    vals = [pt.values[0] for pt in t.points]
    assert vals == [Fraction(2**n, 2**n + 1) for n in range(2, 6)]


def test_trajectory_labels_increasing():
    fam = family_from_lines(["true"])
    with pytest.raises(ConvergenceError):
        trajectory(fam, [(3, generate_hn(3)), (2, generate_hn(2))])


def test_trajectory_mc_deterministic():
    fam = family_from_lines(["adj(x1,x2)"])
    t1 = trajectory(fam, hn_sequence(2, 3), mode="mc", samples=500, seed=4)
    t2 = trajectory(fam, hn_sequence(2, 3), mode="mc", samples=500, seed=4)
    assert t1.points == t2.points
    assert t1.to_csv() == t2.to_csv()


def test_estimate_limit():
    fam = family_from_lines(["exists x2. adj(x1,x2)"])
    t = trajectory(fam, hn_sequence(2, 8))
    (lim,) = estimate_limit(t, 0.02)
    assert lim is not None and lim > 0.98
    (lim,) = estimate_limit(t, 1e-6)
    assert lim is None
    with pytest.raises(ConvergenceError):
        estimate_limit(trajectory(fam, hn_sequence(2, 3)), 0.02)


def test_find_roots_h2_hits_target():
    fam = family_from_lines(["adj(x1,r1)"])
    r = find_roots(generate_hn(2), fam, [Fraction(2, 5)], 1)
    assert r.delta == 0 and r.mode == "exhaustive"
    assert r.roots[0] in generate_hn(2).part_b


def test_find_roots_length_mismatch():
    fam = family_from_lines(["adj(x1,r1)"])
    with pytest.raises(ConvergenceError):
        find_roots(generate_hn(2), fam, [0.4, 0.5], 1)


def test_find_roots_sampled_mode():
    fam = family_from_lines(["adj(x1,r1)"])
    r = find_roots(generate_hn(2), fam, [Fraction(2, 5)], 2, budget=50, seed=1)
    assert r.mode == "sampled"
    assert len(r.roots) == 2


def test_counterexample_report():
    rep = counterexample_report(2, 6)
    assert [row.n for row in rep.rows] == [2, 3, 4, 5, 6]
    assert rep.rows[0].max_rooted == Fraction(2, 5)
    vals = [row.max_rooted for row in rep.rows]
    assert all(v <= Fraction(1, 2) for v in vals)
    assert vals == sorted(vals)
    assert rep.verdict == "counterexample reproduced"
    assert "2/3" in rep.to_text()


def test_tuple_shadow_probability_exact():
    assert tuple_shadow_probability(3, 1, 1) == Fraction(2**3 - 2, 2**3 + 1)
    assert tuple_shadow_probability(3, 0, 3) == 1
    assert tuple_shadow_probability(3, 0, 4) == 0
    with pytest.raises(ConvergenceError):
        tuple_shadow_probability(5, 2, 1, budget=100)


def test_tuple_shadow_probability_mc():
    est = tuple_shadow_probability(4, 1, 1, mode="mc", samples=4000, seed=9)
    assert isinstance(est, PairingEstimate)
    exact = float(Fraction(2**4 - 2, 2**4 + 1))
    assert abs(est.estimate - exact) <= est.radius
