import random

import pytest

from folim.efgame import (
    DUPLICATOR,
    SPOILER,
    GameError,
    Position,
    minimax_duplicator,
    minimax_spoiler,
    mirror_duplicator,
    partial_iso,
    play,
    random_duplicator,
    random_spoiler,
    sample_sentence_battery,
    solve,
    twin_representatives,
)
from folim.evaluate import satisfies
from folim.graph import CapExceeded, complete_graph, generate_hn, make_graph


def _oracle(gl, gr, pairs, rounds):
    """Plain recursive game-tree search, no memoization."""
    if not partial_iso(gl, gr, pairs):
        return SPOILER
    if rounds == 0:
        return DUPLICATOR
    for side_left in (True, False):
        g, other = (gl, gr) if side_left else (gr, gl)
        for v in range(g.n):
            refuted = True
            for w in range(other.n):
                pair = (v, w) if side_left else (w, v)
                if _oracle(gl, gr, pairs + ((pair),), rounds - 1) == DUPLICATOR:
                    refuted = False
                    break
            if refuted:
                return SPOILER
    return DUPLICATOR


def _random_graph(rng, n):
    edges = [
        (u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.5
    ]
    return make_graph(n, edges)


def test_partial_iso():
    g = complete_graph(3)
    h = make_graph(3, [(0, 1)])
    assert partial_iso(g, h, [(0, 0), (1, 1)])
    assert not partial_iso(g, h, [(0, 0), (1, 2)])
    # equality pattern must match both ways
    assert not partial_iso(g, h, [(0, 0), (0, 1)])
    assert not partial_iso(g, h, [(0, 0), (1, 0)])


def test_k1_k2():
    k1, k2 = complete_graph(1), complete_graph(2)
    assert solve(k1, k2, (), 1) == DUPLICATOR
    assert solve(k1, k2, (), 2) == SPOILER


def test_h2_h3_two_rounds():
    assert solve(generate_hn(2), generate_hn(3), (), 2) == DUPLICATOR


def test_solve_caps():
    with pytest.raises(CapExceeded):
        solve(generate_hn(2), generate_hn(3), (), 6)
    with pytest.raises(CapExceeded):
        solve(generate_hn(3), generate_hn(3), (), 2)


def test_solve_matches_oracle_corpus():
    rng = random.Random(2024)
    for _ in range(30):
        gl = _random_graph(rng, rng.randrange(1, 6))
        gr = _random_graph(rng, rng.randrange(1, 6))
        p = rng.randrange(0, 4)
        assert solve(gl, gr, (), p) == _oracle(gl, gr, (), p)


def test_play_mirror():
    g = generate_hn(2)
    result = play(g, g, [], [], 3, random_spoiler, mirror_duplicator, seed=7)
    assert result.winner == DUPLICATOR
    assert len(result.transcript) == 3


def test_play_roots_prepaired():
    g = complete_graph(2)
    with pytest.raises(GameError):
        play(g, g, [0], [], 1, random_spoiler, mirror_duplicator)
    result = play(g, g, [0], [0], 1, random_spoiler, mirror_duplicator, seed=1)
    assert result.winner == DUPLICATOR


def test_invalid_agent_move_forfeits():
    g = complete_graph(2)

    def bad_spoiler(pos, rng):
        return "left", 99

    def bad_duplicator(pos, rng):
        return -5

    r = play(g, g, [], [], 1, bad_spoiler, mirror_duplicator)
    assert r.winner == DUPLICATOR and r.transcript[-1].vertex == -1

    r = play(g, g, [], [], 1, random_spoiler, bad_duplicator, seed=0)
    assert r.winner == SPOILER and r.transcript[-1].response == -1


def test_minimax_agents_consistent_with_solve():
    rng = random.Random(6)
    for _ in range(10):
        gl = _random_graph(rng, 4)
        gr = _random_graph(rng, 4)
        p = 2
        verdict = solve(gl, gr, (), p)
        result = play(gl, gr, [], [], p, minimax_spoiler, minimax_duplicator, seed=0)
        assert result.winner == verdict


def test_twin_representatives():
    g = generate_hn(3)
    reps = twin_representatives(g)
    assert len(reps) == 8 + 3  # 8 distinct A-rows, 3 B-rows
    pebbled = [reps[0]]
    reps2 = twin_representatives(g, pebbled)
    assert pebbled[0] in reps2


def test_battery_deterministic_and_bounded():
    fam1 = sample_sentence_battery(2, 50, seed=13)
    fam2 = sample_sentence_battery(2, 50, seed=13)
    assert list(fam1) == list(fam2)
    from folim.formula import free_variables, quantifier_depth

    for f in fam1:
        assert quantifier_depth(f) <= 2
        assert not free_variables(f)


def test_battery_separates_k1_k2():
    fam = sample_sentence_battery(2, 50, seed=13)
    k1, k2 = complete_graph(1), complete_graph(2)
    assert any(satisfies(k1, f, {}) != satisfies(k2, f, {}) for f in fam)
