import itertools
import random

import pytest

from singerfact.factor_count import (
    BudgetExceeded,
    DegenerateCaseError,
    StepPlan,
    commutator,
    count_factorizations,
    count_fixed_dets,
    count_json,
    det_sequences,
    jm_commutation,
    jm_element,
    survey_regular_elliptic,
)
from singerfact.gf import build_field, field_of_order
from singerfact.glnq import MatrixGF, index_group, singer_cycle
from singerfact.qformula import tq, tq_q2_character_form

GRID = [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (4, 2)]


def test_singer_examples():
    assert count_factorizations(singer_cycle(2, 2), 2) == 3
    assert count_factorizations(singer_cycle(4, 2), 4) == 3375
    assert count_factorizations(singer_cycle(3, 2), 4) == 1029


def test_empty_product():
    F = build_field(3)
    assert count_factorizations(MatrixGF.identity(F, 2), 0) == 1
    assert count_factorizations(singer_cycle(2, 3), 0) == 0


def test_fixed_dets_examples():
    c = singer_cycle(2, 3)
    d = c.det().value
    assert count_fixed_dets(c, [1, d]) == 4
    assert count_fixed_dets(c, [d, 1]) == 4
    bad = count_fixed_dets(c, [1, 1])
    assert bad == 0 and bad.obstructed


@pytest.mark.parametrize("n,q,ell", [(2, 3, 2), (2, 3, 3), (2, 3, 4), (2, 4, 3), (2, 5, 3), (3, 3, 3)])
def test_det_sequences_partition_the_count(n, q, ell):
    c = singer_cycle(n, q)
    total = sum(count_fixed_dets(c, seq) for seq in det_sequences(q, ell))
    assert total == count_factorizations(c, ell)


@pytest.mark.parametrize("n,q", GRID)
def test_shorter_than_n_gives_zero(n, q):
    c = singer_cycle(n, q)
    for ell in range(n):
        assert count_factorizations(c, ell) == 0


@pytest.mark.parametrize("n,q", GRID)
def test_conjugation_invariance(n, q):
    c = singer_cycle(n, q)
    G = index_group(n, q)
    rng = random.Random(n * 100 + q)
    base = {ell: count_factorizations(c, ell) for ell in (n, n + 1)}
    for _ in range(5):
        h = G.matrix(rng.randrange(len(G)))
        d = h * c * h.inverse()
        for ell, val in base.items():
            assert count_factorizations(d, ell) == val


def test_q2_counts_match_character_form():
    for n in (2, 3, 4):
        c = singer_cycle(n, 2)
        for ell in range(9):
            assert count_factorizations(c, ell) == tq_q2_character_form(n, ell)


@pytest.mark.parametrize("n,q,ell", [(3, 2, 6), (2, 5, 5), (3, 3, 4), (4, 2, 6)])
def test_modes_agree(n, q, ell):
    c = singer_cycle(n, q)
    direct = count_factorizations(c, ell, mode="dense")
    assert count_factorizations(c, ell, mode="dense", mitm=True) == direct
    assert count_factorizations(c, ell, mode="sparse") == direct


def test_counts_beyond_64_bits():
    c = singer_cycle(3, 2)
    val = count_factorizations(c, 20)
    assert val > 2**63
    assert val == tq(3, 20).eval(2)
    assert count_factorizations(c, 20, mitm=True) == val


def test_sparse_larger_group():
    assert count_factorizations(singer_cycle(5, 2), 5, mode="sparse") == 31**4


def test_budget_reports_progress():
    with pytest.raises(BudgetExceeded) as info:
        count_factorizations(singer_cycle(4, 2), 6, mode="sparse", cap=100)
    assert info.value.progress()["cap"] == 100


def test_gl1_f2_refused():
    with pytest.raises(DegenerateCaseError):
        count_factorizations(singer_cycle(1, 2), 1)


def test_gl1_other_fields():
    # every nonidentity scalar is a reflection of GL_1
    c = singer_cycle(1, 5)
    assert count_factorizations(c, 1) == 1
    # a * b = c with a, b != 1 leaves q - 3 choices of a
    assert count_factorizations(c, 2) == 2


def test_survey_examples():
    table = survey_regular_elliptic(2, 3, 2)
    assert len(table) == 3 and set(table.values()) == {8}
    F2 = build_field(2)
    g = MatrixGF.companion(F2, [1, 1, 1, 1, 1])
    assert count_factorizations(g, 4) == 3375
    for ell in (5, 6):
        assert len(set(survey_regular_elliptic(4, 2, ell).values())) == 1


def test_plan_validation():
    with pytest.raises(ValueError):
        StepPlan(2, (None,))
    with pytest.raises(ValueError):
        StepPlan.from_alphas([1, 0])
    with pytest.raises(ValueError):
        StepPlan.from_alphas([5]).validate(3)
    assert StepPlan.from_alphas([1, 2]).describe() == "dets:1,2"


def test_count_json_is_decimal_string():
    c = singer_cycle(2, 2)
    plan = StepPlan.all_reflections(2)
    out = count_json(c, plan, count_factorizations(c, plan))
    assert out["count"] == "3" and out["filter"] == "ALL"


@pytest.mark.parametrize("n,q", [(2, 3), (3, 2), (2, 4)])
def test_jucys_murphy(n, q):
    rep = jm_commutation(n, q)
    assert rep["pass"]
    assert all(p["commute"] for p in rep["pairs"])


def test_self_commutator_vanishes():
    J = jm_element(3, 2, 2, 1)
    assert commutator(J, J).is_zero()
    assert len(jm_element(2, 3, 1, 2)) == 1  # J_1^alpha is a single diagonal matrix


def test_jm_sum_is_reflection_class_sum():
    F = field_of_order(3)
    for a in (1, 2):
        z = jm_element(2, 3, 1, a) + jm_element(2, 3, 2, a)
        h = MatrixGF.from_rows(F, [[1, 1], [0, 1]])
        assert z.conjugate(h) == z


def test_fixed_dets_accept_field_elements():
    c = singer_cycle(2, 5)
    F = c.field
    seqs = [s for s in itertools.product(range(1, 5), repeat=2)]
    by_int = [count_fixed_dets(c, s) for s in seqs]
    by_elem = [count_fixed_dets(c, [F.elem(x) for x in s]) for s in seqs]
    assert by_int == by_elem
