import itertools
import random

import pytest

from singerfact.gf import (
    FieldError,
    FieldMismatchError,
    _PrimeOps,
    arith,
    build_field,
    embed,
    from_subfield,
    is_irreducible,
    is_primitive,
    norm,
    poly_powmod,
)

SMALL = [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (5, 1), (7, 1), (2, 5), (5, 2)]


def test_prime_field_f2():
    F = build_field(2, 1)
    assert F.q == 2 and F.prim_poly == (1,)
    one = F.one()
    assert (one + one).is_zero()


def test_f16_polynomial_is_one_of_the_singer_polys():
    F = build_field(2, 4)
    assert F.prim_poly == (1, 1, 0, 0)  # x^4 + x + 1
    assert list(F.prim_poly) + [1] in ([1, 1, 0, 0, 1], [1, 0, 0, 1, 1])


def test_f9_polynomial_by_exhaustive_scan():
    ops = _PrimeOps(3)
    found = []
    for c0, c1 in itertools.product(range(3), repeat=2):
        f = [c0, c1, 1]
        if c0 == 0 or not is_irreducible(ops, f):
            continue
        x = [0, 1]
        orders = [e for e in range(1, 9) if poly_powmod(ops, x, e, f) == [1]]
        if orders[0] == 8:
            found.append(c0 + 3 * c1)
    F = build_field(3, 2)
    assert F.prim_poly[0] + 3 * F.prim_poly[1] == min(found)
    assert F.prim_poly == (2, 1)


def test_arith_examples():
    F9 = build_field(3, 2)
    g = F9.gen()
    assert g * g**7 == F9.one()
    F16 = build_field(2, 4)
    g3 = F16.gen() ** 3
    assert (g3 + g3).is_zero()
    assert arith(g3, None, "inv") * g3 == F16.one()
    with pytest.raises(ZeroDivisionError):
        arith(F16.zero(), None, "inv")
    with pytest.raises(FieldMismatchError):
        F9.one() + F16.one()


@pytest.mark.parametrize("p,k", SMALL)
def test_field_axioms_exhaustive(p, k):
    F = build_field(p, k)
    els = F.elements()
    zero, one = F.zero(), F.one()
    for a in els:
        assert a + zero == a and a * one == a
        assert (a + (-a)).is_zero()
        if not a.is_zero():
            assert a * a.inverse() == one
    if F.q <= 32:
        for a, b, c in itertools.product(els, repeat=3):
            assert (a + b) + c == a + (b + c)
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
    for a, b in itertools.product(els, repeat=2):
        assert a + b == b + a and a * b == b * a


def test_random_triples_large_field():
    F = build_field(2, 10)
    rng = random.Random(7)
    for _ in range(10_000):
        a, b, c = (F.elem(rng.randrange(F.q)) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c


def test_exp_table_invariant():
    F = build_field(3, 3)
    for i in range(F.q - 1):
        for j in range(F.q - 1):
            assert F.mul_int(F.exp_table[i], F.exp_table[j]) == F.exp_table[(i + j) % (F.q - 1)]
    assert sorted(F.exp_table) == list(range(1, F.q))


@pytest.mark.parametrize("p,k", [(2, 4), (3, 2), (2, 6), (5, 2), (3, 3), (2, 10)])
def test_frobenius_fixes_prime_field(p, k):
    F = build_field(p, k)
    fixed = sorted(a.value for a in F.elements() if a**p == a)
    assert fixed == list(range(p))
    images = {(a**p).value for a in F.elements()}
    assert len(images) == F.q


def test_primitive_polynomial_is_primitive():
    for p, k in SMALL:
        F = build_field(p, k)
        assert is_primitive(_PrimeOps(p), list(F.prim_poly) + [1])


def test_errors():
    with pytest.raises(FieldError):
        build_field(4, 1)
    with pytest.raises(FieldError):
        build_field(2, 30)
    with pytest.raises(FieldError):
        norm(build_field(2, 4).gen(), 3)


def test_norm_embed_examples():
    F16 = build_field(2, 4)
    F4 = build_field(2, 2)
    assert norm(F16.one(), 2) == F4.one()
    assert norm(F16.gen(), 1) == build_field(2, 1).one()
    assert {embed(a, F16).value for a in build_field(2, 1).elements()} == {0, 1}
    assert embed(F4.zero(), 4).is_zero() and embed(F4.one(), 4) == F16.one()
    assert embed(F4.gen(), F16).order() == 3
    assert embed(F4.gen(), F16).exp % 5 == 0
    F9 = build_field(3, 2)
    assert norm(F9.gen(), 1).order() == 2


def _sub_pairs():
    for p in (2, 3, 5, 7):
        for n in range(1, 13):
            if p**n > 2**12:
                break
            for s in range(1, n + 1):
                if n % s == 0:
                    yield p, s, n


@pytest.mark.parametrize("p,s,n", list(_sub_pairs()))
def test_norm_of_embed_is_power(p, s, n):
    small, big = build_field(p, s), build_field(p, n)
    for a in small.elements():
        e = embed(a, big)
        assert norm(e, small) == a ** (n // s)
        assert from_subfield(e, small) == a
    pairs = small.elements() if small.q <= 64 else small.elements()[:16]
    for a in pairs:
        e = embed(a, big)
        for b in pairs:
            assert embed(a + b, big) == e + embed(b, big)
            assert embed(a * b, big) == e * embed(b, big)


def test_norm_is_multiplicative():
    big, sub = build_field(3, 4), build_field(3, 2)
    rng = random.Random(1)
    for _ in range(500):
        a, b = (big.elem(rng.randrange(1, big.q)) for _ in range(2))
        assert norm(a * b, sub) == norm(a, sub) * norm(b, sub)
