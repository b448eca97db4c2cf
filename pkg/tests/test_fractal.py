import json
import random

import numpy as np
import pytest

from conftest import random_tree
from vicsek.errors import BadParameter, DegreeExceedsS, SizeCapExceeded
from vicsek.fractal import (LEAF, MIDDLE, ORIGINAL, generate, single_seed,
                            spider_seed, star_seed, vertex_count, vicsek_step,
                            write_fractal)
from vicsek.tree import bfs_distances, validate_tree, wiener_brute


def path(n):
    return validate_tree(n, [(i, i + 1) for i in range(n - 1)])


@pytest.mark.parametrize("s, n, W", [(2, 3, 4), (3, 4, 9), (4, 5, 16)])
def test_star_seed(s, n, W):
    t = star_seed(s)
    assert t.n == n
    assert t.neighbors(0).tolist() == list(range(1, s + 1))
    assert wiener_brute(t) == W


def test_star_seed_rejects_small_s():
    with pytest.raises(BadParameter):
        star_seed(1)


def test_step_p3_gives_p9():
    f = vicsek_step(path(3), 2)
    assert f.n == 9
    assert sorted(f.graph.degrees.tolist()) == [1, 1] + [2] * 7
    assert max(bfs_distances(f, v).max() for v in range(9)) == 8
    assert wiener_brute(f) == 120


def test_step_p2_with_s3():
    f = vicsek_step(path(2), 3)
    assert f.n == 8
    # u-a-b-v plus two leaves on each end
    assert f.graph.edge_list() == [(0, 2), (2, 3), (3, 1), (0, 4), (0, 5), (1, 6), (1, 7)]
    assert wiener_brute(f) == 74


def test_step_single_vertex_gives_star():
    f = vicsek_step(single_seed(), 4)
    assert f.n == 5
    assert f.graph.degrees.tolist() == [4, 1, 1, 1, 1]


def test_step_rejects_high_degree():
    with pytest.raises(DegreeExceedsS, match="vertex 0"):
        vicsek_step(star_seed(4), 3)


def test_step_rejects_mismatched_s():
    f = generate(star_seed(3), 3, 1)
    with pytest.raises(BadParameter):
        vicsek_step(f, 4)


def test_generate_typical_125():
    assert generate(star_seed(4), 4, 2).n == 125


def test_generate_spider_25():
    assert generate(spider_seed(), 4, 1).n == 25


def test_generate_t0_is_seed():
    seed = spider_seed()
    f = generate(seed, 4, 0)
    assert f.t == 0
    assert f.graph.edge_list() == seed.edge_list()
    assert (f.vertex_kind == ORIGINAL).all()


def test_generate_cap(monkeypatch):
    with pytest.raises(SizeCapExceeded, match="125"):
        generate(star_seed(4), 4, 2, cap=100)
    monkeypatch.setenv("VICSEK_CAP_VERTICES", "50")
    with pytest.raises(SizeCapExceeded):
        generate(star_seed(4), 4, 2)
    monkeypatch.setenv("VICSEK_CAP_VERTICES", "125")
    assert generate(star_seed(4), 4, 2).n == 125


def test_generate_cap_checked_before_building():
    with pytest.raises(SizeCapExceeded, match=str(5 ** 30)):
        generate(star_seed(4), 4, 29)


def test_generate_degree_check():
    with pytest.raises(DegreeExceedsS):
        generate(spider_seed(), 2, 1)


@pytest.mark.parametrize("args, expected", [
    ((5, 4, 1), 25),
    ((5, 4, 2), 125),
    ((7, 3, 0), 7),
    ((1, 2, 3), 27),
])
def test_vertex_count(args, expected):
    assert vertex_count(*args) == expected


@pytest.mark.parametrize("s, t", [(2, 3), (3, 2), (6, 2), (9, 1)])
def test_vertex_count_star_seed(s, t):
    assert vertex_count(s + 1, s, t) == (s + 1) ** (t + 1) == generate(star_seed(s), s, t).n


def test_vertex_count_bad():
    with pytest.raises(BadParameter):
        vertex_count(0, 2, 1)
    with pytest.raises(BadParameter):
        vertex_count(3, 1, 1)


# ---------------------------------------------------------------- invariants

def _instances():
    rng = random.Random(5)
    out = [(star_seed(2), 2), (star_seed(4), 4), (spider_seed(), 3), (spider_seed(), 5),
           (single_seed(), 3)]
    for n in (6, 11, 17, 30):
        t = random_tree(n, rng)
        out.append((t, max(2, t.max_degree()) + rng.randrange(2)))
    return out


@pytest.mark.parametrize("seed, s", _instances())
def test_distances_triple(seed, s):
    f = vicsek_step(seed, s)
    for u in range(seed.n):
        old = bfs_distances(seed, u)
        new = bfs_distances(f, u)[:seed.n]
        assert (new == 3 * old).all()


@pytest.mark.parametrize("seed, s", _instances())
def test_degrees_after_step(seed, s):
    f = vicsek_step(seed, s)
    deg = f.graph.degrees
    kind = f.vertex_kind
    assert (deg[:seed.n] == s).all()
    assert (deg[kind == MIDDLE] == 2).all()
    assert (deg[kind == LEAF] == 1).all()


@pytest.mark.parametrize("seed, s", _instances())
def test_generated_is_tree_with_degrees_1_2_s(seed, s):
    for t in range(4):
        if vertex_count(seed.n, s, t) > 5000:
            break
        f = generate(seed, s, t)
        assert f.graph.is_tree()
        assert f.n == vertex_count(seed.n, s, t)
        if t >= 1:
            assert set(f.graph.degrees.tolist()) <= {1, 2, s}
            assert (f.graph.degrees[:seed.n] == s).all()


@pytest.mark.parametrize("seed, s", _instances())
def test_stars_partition_vertices(seed, s):
    f = vicsek_step(seed, s)
    covered = []
    for v in range(seed.n):
        covered.append(v)
        covered.extend(f.graph.neighbors(v).tolist())
    assert sorted(covered) == list(range(f.n))


def test_birth_steps_and_kinds():
    f = generate(star_seed(4), 4, 2)
    assert np.bincount(f.birth_step).tolist() == [5, 20, 100]
    assert f.n0 == 5
    # first step: 4 edges -> 8 middles, then 3 leaves on each of the 4 old leaves
    assert f.vertex_kind[5:13].tolist() == [MIDDLE] * 8
    assert f.vertex_kind[13:25].tolist() == [LEAF] * 12


def test_generation_is_deterministic(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    write_fractal(generate(spider_seed(), 4, 2), a)
    write_fractal(generate(spider_seed(), 4, 2), b)
    assert a.read_bytes() == b.read_bytes()
    assert (tmp_path / "a.txt.json").read_bytes() == (tmp_path / "b.txt.json").read_bytes()


def test_sidecar_schema(tmp_path):
    f = generate(star_seed(2), 2, 1)
    side = json.loads(write_fractal(f, tmp_path / "g.txt").read_text())
    assert set(side) == {"n0", "s", "t", "vertex_count", "birth_step", "vertex_kind"}
    assert side["vertex_count"] == 9
    assert side["n0"] == 3
    assert side["vertex_kind"][:3] == ["original"] * 3
    assert set(side["vertex_kind"]) == {"original", "inserted-middle", "attached-leaf"}
