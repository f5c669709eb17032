import pytest

from singerfact.charvals import (
    F_ROUTES,
    Partition,
    class_sum_value,
    content_identity,
    f_lambda,
    frobenius_count,
    hook_degree,
    hook_degree_square_sum,
    hook_shape,
    partitions,
    standard_tableaux,
)
from singerfact.glnq import enumerate_reflections, gl_order
from singerfact.qformula import ONE, Q, ZERO, q_int, q_poch_q, pochhammer, tq, tq_nlm


def test_f_lambda_examples():
    for n in range(1, 7):
        assert f_lambda(Partition((n,)), "maj_sum") == ONE
        assert f_lambda(Partition((1,) * n)) == Q ** (n * (n - 1) // 2)
    assert f_lambda(Partition((2, 1))) == Q + Q**2


@pytest.mark.parametrize("size", range(1, 9))
def test_routes_and_content_identity(size):
    for lam in partitions(size):
        vals = [f_lambda(lam, r) for r in F_ROUTES]
        assert vals[0] == vals[1] == vals[2]
        assert content_identity(lam)


def test_tableaux_count_is_f_at_one():
    lam = Partition((3, 2, 1))
    assert sum(1 for _ in standard_tableaux(lam)) == f_lambda(lam).eval(1) == 16


def test_partition_basics():
    lam = Partition.of(1, 3, 2)
    assert lam.parts == (3, 2, 1) and lam.size == 6
    assert lam.conjugate == lam
    assert hook_shape(4, 2).parts == (2, 1, 1)
    assert [p.parts for p in partitions(3)] == [(3,), (2, 1), (1, 1, 1)]
    with pytest.raises(ValueError):
        Partition((1, 2))


def test_hook_degree_examples():
    for n in range(1, 6):
        assert hook_degree(n, 1, 0) == (1, ONE)
        assert hook_degree(n, 1, n - 1)[1] == Q ** (n * (n - 1) // 2)
    sign, deg = hook_degree(4, 2, 0)
    assert sign == 1 and deg == q_poch_q(4).exact_div(pochhammer(Q**2, 2, base=Q**2))
    with pytest.raises(ValueError):
        hook_degree(4, 3, 0)


def test_class_sum_values():
    for n in range(2, 5):
        for q in (2, 3, 4, 5):
            transvections = len(enumerate_reflections(n, q, 1))
            val = class_sum_value(n, 1, 0, "transvection")
            assert val.coeff.eval(q) == transvections
    assert class_sum_value(4, 2, 0, "semisimple").coeff == ZERO
    assert class_sum_value(4, 2, 1, "transvection").coeff == -q_int(4)


def test_frobenius_examples():
    assert frobenius_count(2, 3, 2, 1) == 4
    assert frobenius_count(4, 2, 4, 4) == 3375
    for n in range(2, 5):
        for ell in range(n):
            assert frobenius_count(n, 2, ell, ell) == 0


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_frobenius_grid(q):
    for n in range(2, 6):
        for ell in range(9):
            if q == 2:
                assert frobenius_count(n, q, ell, ell) == tq(n, ell).eval(2)
            else:
                for m in range(ell):
                    assert frobenius_count(n, q, ell, m) == tq_nlm(n, ell, m).eval(q)


def test_frobenius_alpha_obstruction():
    # F_3^x: 2 * 2 = 1 cannot equal the determinant of the Singer cycle
    assert frobenius_count(2, 3, 3, 1, alphas=[1, 2, 2]) == 0
    assert frobenius_count(2, 5, 3, 1, alphas=[1, 3, 4]) == tq_nlm(2, 3, 1).eval(5)
    with pytest.raises(ValueError):
        frobenius_count(2, 2, 3, 1)


def test_degree_square_bound():
    for n in range(1, 6):
        for q in (2, 3):
            assert hook_degree_square_sum(n, q) <= gl_order(n, q)
