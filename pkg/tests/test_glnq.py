import random

import numpy as np
import pytest

from singerfact.gf import build_field, field_of_order, is_primitive
from singerfact.glnq import (
    GLError,
    MatrixGF,
    SingularMatrixError,
    BoundExceeded,
    batch_fixed_codim,
    enumerate_reflections,
    gl_order,
    has_stable_subspace,
    index_group,
    irreducible_companions,
    is_regular_elliptic,
    mat_ops,
    q_integer,
    singer_cycle,
)


def random_invertible(F, n, rng):
    while True:
        m = MatrixGF.from_rows(F, [[rng.randrange(F.q) for _ in range(n)] for _ in range(n)])
        if not m.det().is_zero():
            return m


def test_basic_ops():
    F = build_field(3, 1)
    I = MatrixGF.identity(F, 3)
    assert I.fixed_codim() == 0
    rng = random.Random(3)
    for _ in range(20):
        a, b = random_invertible(F, 3, rng), random_invertible(F, 3, rng)
        assert a * a.inverse() == I
        assert (a * b).det() == a.det() * b.det()
        assert mat_ops(a, b, "mul") == a * b
        assert MatrixGF.from_key(F, 3, a.key) == a
    with pytest.raises(SingularMatrixError):
        MatrixGF.from_rows(F, [[1, 2], [2, 1]]).inverse()
    with pytest.raises(GLError):
        MatrixGF.identity(F, 2) * I


@pytest.mark.parametrize("q", [2, 3, 4, 5, 9])
def test_companion_det_and_charpoly(q):
    F = field_of_order(q)
    rng = random.Random(q)
    for n in range(1, 5):
        for _ in range(5):
            f = [rng.randrange(q) for _ in range(n)] + [1]
            c = MatrixGF.companion(F, f)
            assert c.charpoly() == f
            expect = f[0] if n % 2 == 0 else F.neg_int(f[0])
            assert c.det().value == expect


def test_charpoly_conjugation_invariant():
    for q, n in [(2, 4), (3, 3), (4, 3), (5, 3)]:
        F = field_of_order(q)
        rng = random.Random(n * q)
        for _ in range(10):
            a, h = random_invertible(F, n, rng), random_invertible(F, n, rng)
            assert (h * a * h.inverse()).charpoly() == a.charpoly()
            cp = a.charpoly()
            assert cp[0] == (a.det().value if n % 2 == 0 else F.neg_int(a.det().value))


@pytest.mark.parametrize(
    "n,q,order", [(2, 2, 6), (4, 2, 20160), (3, 3, 11232), (2, 3, 48), (3, 2, 168), (2, 4, 180)]
)
def test_index_group(n, q, order):
    G = index_group(n, q)
    assert G.order == order == gl_order(n, q)
    assert np.all(np.diff(G.keys) > 0)
    F = field_of_order(q)
    rng = random.Random(1)
    for i in rng.sample(range(order), min(order, 50)):
        m = G.matrix(i)
        assert not m.det().is_zero()
        assert G.index(m.key) == i


def test_index_bound():
    with pytest.raises(BoundExceeded):
        index_group(4, 3, bound=10**6)


def test_right_left_multiplication_tables():
    G = index_group(3, 3)
    F = G.field
    rng = random.Random(5)
    M = random_invertible(F, 3, rng)
    r, l = G.right_mul(M), G.left_mul(M)
    for i in rng.sample(range(G.order), 30):
        g = G.matrix(i)
        assert G.matrix(r[i]) == g * M
        assert G.matrix(l[i]) == M * g
    assert sorted(r) == list(range(G.order))


@pytest.mark.parametrize(
    "n,q,trans,semi",
    [(2, 2, 3, 0), (2, 3, 8, 12), (3, 2, 21, 0), (2, 4, 15, 20), (4, 2, 105, 0), (3, 3, 104, 117)],
)
def test_reflection_counts(n, q, trans, semi):
    refl = enumerate_reflections(n, q)
    t = [r for r in refl if r.kind == "transvection"]
    assert len(t) == trans == q_integer(n, q) * (q ** (n - 1) - 1)
    for a in range(2, q):
        s = enumerate_reflections(n, q, a)
        assert len(s) == semi == q_integer(n, q) * q ** (n - 1)
        assert all(r.det.value == a and r.kind == "semisimple" for r in s)
    assert len({r.key for r in refl}) == len(refl)
    for r in refl:
        assert r.matrix.fixed_codim() == 1
        assert (r.kind == "transvection") == (r.det.value == 1)


@pytest.mark.parametrize("n,q", [(2, 2), (2, 3), (2, 4), (2, 5), (2, 7), (2, 8), (2, 9), (3, 2), (3, 3), (3, 4), (4, 2)])
def test_reflection_census_by_scan(n, q):
    G = index_group(n, q)
    F = G.field
    codim = batch_fixed_codim(F, G.matrices())
    scanned = set(G.keys[codim == 1].tolist())
    assert scanned == {r.key for r in enumerate_reflections(n, q)}


def test_singer_cycles():
    assert singer_cycle(2, 2).order() == 3
    assert singer_cycle(4, 2).charpoly() in ([1, 1, 0, 0, 1], [1, 0, 0, 1, 1])
    assert singer_cycle(3, 3).order() == 26
    for n, q in [(1, 3), (2, 3), (2, 4), (3, 2), (2, 5), (3, 4), (2, 9)]:
        c = singer_cycle(n, q)
        assert c.order() == q**n - 1
        F = field_of_order(q)
        assert is_primitive(F, c.charpoly())
        assert is_regular_elliptic(c)
        assert c.det().order() == q - 1


def test_regular_elliptic_examples():
    F = build_field(2)
    assert not is_regular_elliptic(MatrixGF.identity(F, 2))
    g = MatrixGF.companion(F, [1, 1, 1, 1, 1])
    assert is_regular_elliptic(g) and g.order() == 5


@pytest.mark.parametrize("n,q", [(2, 2), (2, 3), (2, 4), (2, 5), (2, 7), (3, 2)])
def test_regular_elliptic_equivalence(n, q):
    G = index_group(n, q)
    assert G.order <= 10**4
    for i in range(G.order):
        g = G.matrix(i)
        assert is_regular_elliptic(g) == (not has_stable_subspace(g))


def test_reflection_classes_closed_under_conjugation():
    rng = random.Random(11)
    for n, q in [(3, 3), (2, 4), (4, 2)]:
        F = field_of_order(q)
        for a in range(1, q):
            keys = {r.key for r in enumerate_reflections(n, q, a)}
            for _ in range(3):
                h = random_invertible(F, n, rng)
                hi = h.inverse()
                conj = {(h * r.matrix * hi).key for r in enumerate_reflections(n, q, a)}
                assert conj == keys


def test_irreducible_companions_count():
    assert len(irreducible_companions(2, 3)) == 3
    assert len(irreducible_companions(4, 2)) == 3


def test_json_roundtrip():
    c = singer_cycle(2, 4)
    assert MatrixGF.from_json(c.to_json()) == c
