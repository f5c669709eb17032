import random

import pytest

from singerfact.absorder import (
    NotInInterval,
    absolute_length,
    interval,
    interval_json,
    kreweras,
    pi_map_report,
    prefix_products,
)
from singerfact.factor_count import count_factorizations
from singerfact.gf import build_field
from singerfact.glnq import MatrixGF, enumerate_reflections, index_group, singer_cycle


def test_absolute_length_examples():
    F = build_field(3)
    assert absolute_length(MatrixGF.identity(F, 3)) == 0
    for r in enumerate_reflections(3, 3)[:20]:
        assert absolute_length(r.matrix) == 1
    for n, q in [(2, 2), (3, 3), (4, 2)]:
        assert absolute_length(singer_cycle(n, q)) == n


@pytest.mark.parametrize("n,q", [(2, 2), (2, 3), (3, 2)])
def test_absolute_length_is_shortest_factorization(n, q):
    G = index_group(n, q)
    rng = random.Random(3)
    for _ in range(25):
        g = G.matrix(rng.randrange(len(G)))
        k = absolute_length(g)
        assert all(count_factorizations(g, j) == 0 for j in range(k))
        assert count_factorizations(g, k) > 0


def test_subadditive():
    G = index_group(3, 3)
    rng = random.Random(9)
    for _ in range(300):
        g, h = (G.matrix(rng.randrange(len(G))) for _ in range(2))
        assert absolute_length(g * h) <= absolute_length(g) + absolute_length(h)


def test_interval_rank_sizes():
    data = interval(singer_cycle(4, 2))
    assert data.rank_sizes == [1, 60, 240, 60, 1]
    assert sum(data.rank_sizes) == len(data)
    assert interval(singer_cycle(2, 2)).rank_sizes == [1, 3, 1]
    c = singer_cycle(3, 3)
    d = interval(c)
    assert [m.key for m in d.members(0)] == [MatrixGF.identity(c.field, 3).key]
    assert [m.key for m in d.members(3)] == [c.key]


@pytest.mark.parametrize("n,q", [(2, 3), (3, 2), (3, 3), (4, 2), (2, 5)])
def test_kreweras(n, q):
    c = singer_cycle(n, q)
    data = interval(c)
    assert data.rank_sizes == data.rank_sizes[::-1]
    e = MatrixGF.identity(c.field, n)
    assert kreweras(e, c) == c and kreweras(c, c) == e
    ci = c.inverse()
    for w in data.members():
        k = kreweras(w, c, data)
        assert k in data
        assert data.rank_of(k) == n - data.rank_of(w)
        assert kreweras(k, c, data) == ci * w * c


def test_kreweras_rejects_outsiders():
    c = singer_cycle(2, 3)
    outside = c * c
    with pytest.raises(NotInInterval):
        kreweras(outside, c)
    with pytest.raises(NotInInterval):
        interval(c).rank_of(outside)


def test_pi_map_gl4_f2():
    rep = pi_map_report(singer_cycle(4, 2))
    assert rep["lattice_rank_sizes"] == [1, 15, 35, 15, 1]
    assert rep["pi_image_sizes"] == [1, 15, 35, 15, 1]
    assert 240 % 35 != 0
    assert len(rep["fiber_multiset_by_rank"]["2"]) > 1
    assert not rep["constant_fibers"]


@pytest.mark.parametrize("n,q", [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3)])
def test_pi_surjective_small(n, q):
    assert pi_map_report(singer_cycle(n, q))["pi_surjective"]


def test_missed_subspaces_are_listed():
    # a transvection: its interval is {e, t}, far from onto
    t = enumerate_reflections(2, 2, 1)[0].matrix
    rep = pi_map_report(t)
    assert not rep["pi_surjective"]
    assert len(rep["missed"]["1"]) == 2


@pytest.mark.parametrize("n", [2, 3, 4])
def test_members_are_prefix_products(n):
    c = singer_cycle(n, 2)
    assert {int(k) for k in interval(c).keys} == prefix_products(c)


def test_interval_json_schema():
    out = interval_json(singer_cycle(3, 2))
    for key in ("n", "q", "rank_sizes", "pi_image_sizes", "pi_surjective", "fiber_multiset_by_rank"):
        assert key in out
