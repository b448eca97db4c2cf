import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_tree
from vicsek.errors import (DegenerateSize, IdOutOfRange, SameSourceTarget,
                           TooLargeForExactSolve)
from vicsek.fractal import generate, star_seed
from vicsek.tree import Graph, bfs_distances, validate_tree, wiener_brute
from vicsek.walks import (hitting_time_table, hitting_times_solve,
                          hitting_times_tree, mc_first_passage, mc_mfpt,
                          mfpt_oracle)


def path(n):
    return validate_tree(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def dense_hitting(graph, target):
    """Float reference: solve (I - P) h = 1 off the target with numpy."""
    n = graph.n
    A = np.zeros((n, n))
    for u, v in graph.edge_list():
        A[u, v] = A[v, u] = 1
    P = A / A.sum(axis=1, keepdims=True)
    M = np.eye(n) - P
    M[target, :] = 0
    M[target, target] = 1
    b = np.ones(n)
    b[target] = 0
    return np.linalg.solve(M, b)


# ---------------------------------------------------------------- tree oracle

@pytest.mark.parametrize("s", [2, 3, 4, 7])
def test_star_leaf_to_centre(s):
    h = hitting_times_tree(star_seed(s), 0)
    assert h[1:].tolist() == [1] * s


@pytest.mark.parametrize("s", [2, 3, 4, 7])
def test_star_centre_to_leaf(s):
    h = hitting_times_tree(star_seed(s), 1)
    assert h[0] == 2 * s - 1
    assert h[2] == 2 * s


def test_p9_end_to_end():
    assert hitting_times_tree(path(9), 8)[0] == 64 == sum(2 * k - 1 for k in range(1, 9))


def test_tree_oracle_target_out_of_range():
    with pytest.raises(IdOutOfRange):
        hitting_times_tree(path(3), 5)


def test_tree_oracle_matches_dense_float_solve(rng):
    t = random_tree(60, rng)
    for target in (0, 17, 59):
        assert np.allclose(hitting_times_tree(t, target), dense_hitting(t, target), rtol=1e-9)


# ---------------------------------------------------------------- generic solver

def test_solve_p3():
    h = hitting_times_solve(path(3), 2)
    assert h == [4, 3, 0]
    assert all(isinstance(x, Fraction) for x in h)


def test_solve_star_leaf_to_leaf():
    h = hitting_times_solve(star_seed(4), 3)
    assert h[1] == 8 == 1 + hitting_times_tree(star_seed(4), 3)[0]


@pytest.mark.parametrize("n", [3, 5, 8, 13])
def test_solve_cycle_closed_form(n):
    h = hitting_times_solve(cycle(n), 0)
    assert h == [k * (n - k) for k in range(n)]


@pytest.mark.parametrize("n", [2, 4, 7])
def test_solve_complete_graph(n):
    g = Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])
    h = hitting_times_solve(g, n - 1)
    assert h == [n - 1] * (n - 1) + [0]


def test_solve_general_graph_against_dense():
    g = Graph.from_edges(7, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3), (5, 6), (6, 0)])
    for target in range(7):
        exact = hitting_times_solve(g, target)
        assert exact[target] == 0
        assert np.allclose([float(x) for x in exact], dense_hitting(g, target), rtol=1e-12)


def test_solve_cap():
    with pytest.raises(TooLargeForExactSolve):
        hitting_times_solve(path(301), 0)
    assert hitting_times_solve(path(301), 0, cap=400)[300] == 300 ** 2


@pytest.mark.parametrize("n", [2, 9, 40, 120, 300])
def test_solve_equals_tree_oracle(n):
    t = random_tree(n, random.Random(n))
    for target in {0, n // 2, n - 1}:
        assert hitting_times_solve(t, target) == hitting_times_tree(t, target).tolist()


def test_solve_equals_tree_oracle_on_fractals():
    for f in (generate(star_seed(3), 3, 2), generate(star_seed(2), 2, 4)):
        for target in range(0, f.n, 37):
            assert hitting_times_solve(f, target) == hitting_times_tree(f, target).tolist()


# ---------------------------------------------------------------- identities

@settings(max_examples=40, deadline=None)
@given(st.integers(2, 80), st.integers(0, 2**32))
def test_commute_time_identity(n, seed):
    r = random.Random(seed)
    t = random_tree(n, r)
    for _ in range(5):
        u, v = r.randrange(n), r.randrange(n)
        fwd = hitting_times_tree(t, v)[u]
        back = hitting_times_tree(t, u)[v]
        assert fwd + back == 2 * (n - 1) * bfs_distances(t, u)[v]


def test_hitting_table_properties(rng):
    t = random_tree(25, rng)
    F = hitting_time_table(t).F
    assert (np.diag(F) == 0).all()
    off = F[~np.eye(25, dtype=bool)]
    assert (off > 0).all()


def test_hitting_table_general_graph():
    F = hitting_time_table(cycle(5)).F
    assert F[0, 2] == 6 and F[2, 0] == 6


# ---------------------------------------------------------------- MFPT oracle

@pytest.mark.parametrize("graph, expected", [
    (path(9), Fraction(80, 3)),
    (star_seed(4), Fraction(32, 5)),
    (path(2), Fraction(1)),
])
def test_mfpt_oracle_values(graph, expected):
    assert mfpt_oracle(graph) == expected
    assert mfpt_oracle(graph, method="solve") == expected


@pytest.mark.parametrize("n", [2, 7, 31, 150])
def test_mfpt_oracle_lemma(n):
    t = random_tree(n, random.Random(3 * n))
    assert mfpt_oracle(t) == Fraction(2 * wiener_brute(t), n)


def test_mfpt_oracle_cycle():
    # ordered-pair average of k(n-k) over k = 1..n-1 is n(n+1)/6
    assert mfpt_oracle(cycle(9)) == Fraction(9 * 10, 6)


def test_mfpt_oracle_single_vertex():
    with pytest.raises(DegenerateSize):
        mfpt_oracle(validate_tree(1, []))


def test_mfpt_oracle_solve_cap():
    with pytest.raises(TooLargeForExactSolve):
        mfpt_oracle(cycle(301))


# ---------------------------------------------------------------- Monte Carlo

def test_mc_star_leaf_to_centre_is_deterministic():
    est = mc_first_passage(star_seed(5), 3, 0, 1000, rng_seed=11)
    assert est.mean == 1.0
    assert est.half_width_95 == 0.0


def test_mc_p3_end_to_end():
    est = mc_first_passage(path(3), 0, 2, 100_000, rng_seed=5)
    assert abs(est.mean - 4) < 3 * est.half_width_95
    assert abs(est.mean - 4) / 4 < 0.01


def test_mc_p9_end_to_end_million():
    est = mc_first_passage(path(9), 0, 8, 1_000_000, rng_seed=2024)
    assert abs(est.mean - 64) / 64 < 0.01
    assert abs(est.mean - 64) < 3 * est.half_width_95


def test_mc_p9_coverage():
    hits = 0
    for seed in range(200):
        est = mc_first_passage(path(9), 0, 8, 2000, rng_seed=seed)
        hits += abs(est.mean - 64) <= est.half_width_95
    assert hits >= 0.95 * 200 - 3 * (200 * 0.05 * 0.95) ** 0.5


def test_mc_same_source_target():
    with pytest.raises(SameSourceTarget):
        mc_first_passage(path(3), 1, 1, 10, rng_seed=0)


def test_mc_single_sample_has_infinite_width():
    est = mc_first_passage(path(4), 0, 3, 1, rng_seed=0)
    assert est.samples == 1
    assert est.half_width_95 == float("inf")
    assert est.to_json()["ci95"] is None


def test_mc_reproducible():
    g = generate(star_seed(3), 3, 1)
    a = mc_first_passage(g, 4, 9, 5000, rng_seed=123)
    b = mc_first_passage(g, 4, 9, 5000, rng_seed=123)
    c = mc_first_passage(g, 4, 9, 5000, rng_seed=124)
    assert a == b
    assert a.mean != c.mean


def test_mc_seed_accepts_full_64_bit_range():
    a = mc_first_passage(path(5), 0, 4, 100, rng_seed=2**64 - 1)
    b = mc_first_passage(path(5), 0, 4, 100, rng_seed=2**64 - 1, use_numba=False)
    assert a == b


def test_mc_mfpt_p2_exact():
    est = mc_mfpt(path(2), 50, 3, rng_seed=9)
    assert est.mean == 1.0
    assert est.half_width_95 == 0.0
    assert est.samples == 150


def test_mc_mfpt_p9():
    est = mc_mfpt(path(9), 100_000, 10, rng_seed=77)
    assert abs(est.mean - 80 / 3) / (80 / 3) < 0.02


def test_mc_mfpt_64_vertex_fractal():
    f = generate(star_seed(3), 3, 2)
    exact = float(mfpt_oracle(f))
    est = mc_mfpt(f, 4000, 5, rng_seed=31)
    assert abs(est.mean - exact) <= 3 * est.half_width_95


def test_mc_pairs_are_uniform_and_distinct():
    from vicsek.walks import draw_pairs
    u, v = draw_pairs(5, 200_000, rng_seed=1)
    assert (u != v).all()
    counts = np.zeros((5, 5))
    np.add.at(counts, (u, v), 1)
    off = counts[~np.eye(5, dtype=bool)]
    expected = 200_000 / 20
    assert np.abs(off - expected).max() < 5 * expected ** 0.5


def test_mc_mfpt_single_vertex():
    with pytest.raises(DegenerateSize):
        mc_mfpt(validate_tree(1, []), 10, 1, rng_seed=0)
