import random

import numpy as np
import pytest

from singerfact.factor_count import count_factorizations
from singerfact.gf import build_field
from singerfact.glnq import MatrixGF, singer_cycle
from singerfact.hurwitz import (
    EnumerationBudgetExceeded,
    FactTuple,
    apply_braid,
    braid_images,
    singer_orbit_check,
    enumerate_factorizations,
    jordan_block,
    orbit_decompose,
    orbit_report,
    reflection_system,
    tuple_products,
)


def _fact_tuple(rs, row):
    return FactTuple.from_matrices([MatrixGF.from_key(rs.field, rs.n, int(rs.keys[i])) for i in row])


def test_braid_moves_preserve_product_and_dets():
    c = singer_cycle(3, 3)
    tuples = enumerate_factorizations(c, 4)
    rs = reflection_system(3, 3)
    rng = random.Random(5)
    for _ in range(1000):
        t = _fact_tuple(rs, tuples[rng.randrange(len(tuples))])
        i = rng.randint(1, 3)
        u = apply_braid(t, i, inverse=rng.random() < 0.5, field=rs.field, n=3)
        assert u.product == t.product == c.key
        assert u.dets == t.dets


def test_braid_relations():
    c = singer_cycle(4, 2)
    tuples = enumerate_factorizations(c, 5, cross_check=False)
    rs = reflection_system(4, 2)
    rng = np.random.default_rng(11)
    sample = tuples[rng.choice(len(tuples), 1000, replace=False)]

    def s(t, i, inv=False):
        return braid_images(rs, t, i, inv)

    for i in range(4):
        assert np.array_equal(s(s(sample, i), i, True), sample)
        assert np.array_equal(s(s(sample, i, True), i), sample)
    for i in range(3):
        assert np.array_equal(s(s(s(sample, i), i + 1), i), s(s(s(sample, i + 1), i), i + 1))
    for i in range(4):
        for j in range(i + 2, 4):
            assert np.array_equal(s(s(sample, i), j), s(s(sample, j), i))


def test_vectorized_braid_matches_matrix_version():
    c = singer_cycle(2, 5)
    tuples = enumerate_factorizations(c, 3)
    rs = reflection_system(2, 5)
    for row in tuples[:50]:
        t = _fact_tuple(rs, row)
        for i in (0, 1):
            for inv in (False, True):
                img = braid_images(rs, row[None, :], i, inv)[0]
                assert _fact_tuple(rs, img) == apply_braid(t, i + 1, inv, field=rs.field, n=2)


@pytest.mark.parametrize("n,q,ell", [(2, 3, 3), (3, 2, 4), (2, 4, 3), (3, 3, 3)])
def test_enumeration_matches_count(n, q, ell):
    c = singer_cycle(n, q)
    tuples = enumerate_factorizations(c, ell, cross_check=False)
    assert len(tuples) == count_factorizations(c, ell)
    assert np.all(tuple_products(c, tuples) == c.key)
    assert len(np.unique(tuples, axis=0)) == len(tuples)


def test_jordan_block_orbits():
    u = jordan_block(4, 2)
    tuples = enumerate_factorizations(u, 3)
    assert len(tuples) == 64
    assert sorted(orbit_decompose(u, tuples).sizes) == [16, 48]


def test_singer_and_order_five_orbits():
    c = singer_cycle(4, 2)
    assert orbit_decompose(c, enumerate_factorizations(c, 4)).sizes == [3375]
    g = MatrixGF.companion(build_field(2), [1, 1, 1, 1, 1])
    dec = orbit_decompose(g, enumerate_factorizations(g, 4))
    assert sum(dec.sizes) == 3375 and len(dec.sizes) == 4


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7])
def test_rank_two_orbits(q):
    rep = singer_orbit_check(2, q, 2)
    assert rep["pass"]
    for cls in rep["classes"]:
        assert cls["tuple_count"] in (q + 1, 2 * (q + 1))


@pytest.mark.parametrize(
    "n,q,ell",
    [(2, 2, 2), (3, 2, 3), (4, 2, 4), (3, 2, 4), (2, 3, 2), (2, 3, 3), (2, 3, 4), (3, 3, 3), (2, 5, 2), (2, 5, 3)],
)
def test_single_orbit_per_det_multiset(n, q, ell):
    assert singer_orbit_check(n, q, ell)["pass"]


@pytest.mark.slow
def test_heavy_rank_five():
    rep = singer_orbit_check(5, 2, 5)
    assert rep["pass"] and rep["tuple_count"] == 31**4


def test_orbit_labels_partition_input():
    c = singer_cycle(2, 5)
    tuples = enumerate_factorizations(c, 3)
    dec = orbit_decompose(c, tuples)
    assert sum(dec.sizes) == len(tuples)
    assert np.array_equal(np.bincount(dec.labels), dec.sizes)
    rs = reflection_system(2, 5)
    for oid in range(len(dec.sizes)):
        rows = tuples[dec.labels == oid]
        dets = {tuple(sorted(rs.dets[r])) for r in rows}
        assert dets == {dec.det_multisets[oid]}


def test_orbit_report_schema():
    rep = orbit_report(singer_cycle(2, 3), 3)
    assert set(rep) >= {"target_charpoly", "ell", "classes"}
    for cls in rep["classes"]:
        assert set(cls) == {"det_multiset", "tuple_count", "orbit_sizes"}
        assert sum(cls["orbit_sizes"]) == cls["tuple_count"]


def test_budget():
    with pytest.raises(EnumerationBudgetExceeded) as info:
        enumerate_factorizations(singer_cycle(4, 2), 6, budget=1000)
    assert info.value.budget == 1000


def test_wrong_product_rejected():
    c = singer_cycle(2, 3)
    tuples = enumerate_factorizations(c, 2)
    with pytest.raises(ValueError):
        orbit_decompose(singer_cycle(2, 3) * c, tuples)


def test_fact_tuple_rejects_non_reflections():
    F = build_field(2)
    with pytest.raises(ValueError):
        FactTuple.from_matrices([singer_cycle(2, 2)])
    with pytest.raises(IndexError):
        t = FactTuple.from_matrices([MatrixGF.from_rows(F, [[1, 1], [0, 1]])])
        apply_braid(t, 1, field=F, n=2)
