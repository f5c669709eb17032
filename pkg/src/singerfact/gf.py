"""Small finite fields F_{p^k} realized by exp/log/Zech tables.

Elements have two interchangeable encodings:

* the *integer representation* ``v`` in ``[0, q)``: the base-p digits of ``v``
  are the coordinates in the polynomial basis ``1, g, ..., g^{k-1}`` where
  ``g`` is a root of the field's primitive polynomial;
* the *exponent representation* used by :class:`FqElem`: ``None`` for zero,
  otherwise ``e`` with ``0 <= e < q - 1`` standing for ``g^e``.

Matrices and polynomials elsewhere in the package store integer
representations; :class:`FqElem` is the scalar front end.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

DEFAULT_FIELD_BOUND = 2**20


class FieldError(ValueError):
    pass


class FieldMismatchError(FieldError):
    """Raised when elements of different fields are combined."""


# ---------------------------------------------------------------------------
# integer helpers


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division.

    >>> factorize(360)
    {2: 3, 3: 2, 5: 1}
    """
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, k)`` with ``q == p**k``; raise if ``q`` is not a prime power."""
    fs = factorize(q) if q > 1 else {}
    if len(fs) != 1:
        raise FieldError(f"{q} is not a prime power")
    ((p, k),) = fs.items()
    return p, k


def mobius(n: int) -> int:
    fs = factorize(n)
    if any(e > 1 for e in fs.values()):
        return 0
    return -1 if len(fs) % 2 else 1


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


# ---------------------------------------------------------------------------
# polynomials over a small field, coefficient lists low -> high.
# ``F`` is anything exposing q, add_int, sub_int, mul_int, neg_int, inv_int.


class _PrimeOps:
    """Arithmetic of F_p on residues; used to bootstrap the table build."""

    def __init__(self, p: int):
        self.q = p
        self.p = p

    def add_int(self, a, b):
        return (a + b) % self.p

    def sub_int(self, a, b):
        return (a - b) % self.p

    def mul_int(self, a, b):
        return (a * b) % self.p

    def neg_int(self, a):
        return (-a) % self.p

    def inv_int(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)


def poly_trim(a: Sequence[int]) -> list[int]:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_add(F, a, b) -> list[int]:
    n = max(len(a), len(b))
    return poly_trim(
        F.add_int(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)
    )


def poly_sub(F, a, b) -> list[int]:
    n = max(len(a), len(b))
    return poly_trim(
        F.sub_int(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)
    )


def poly_mul(F, a, b) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = F.add_int(out[i + j], F.mul_int(x, y))
    return poly_trim(out)


def poly_divmod(F, a, b) -> tuple[list[int], list[int]]:
    b = poly_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = poly_trim(a)
    db = len(b) - 1
    if len(r) - 1 < db:
        return [], r
    inv_lead = F.inv_int(b[-1])
    quo = [0] * (len(r) - db)
    while len(r) - 1 >= db and r:
        shift = len(r) - 1 - db
        c = F.mul_int(r[-1], inv_lead)
        quo[shift] = c
        for i, y in enumerate(b):
            r[i + shift] = F.sub_int(r[i + shift], F.mul_int(c, y))
        r = poly_trim(r)
    return poly_trim(quo), r


def poly_mod(F, a, f) -> list[int]:
    return poly_divmod(F, a, f)[1]


def poly_monic(F, a) -> list[int]:
    a = poly_trim(a)
    if not a:
        return a
    inv = F.inv_int(a[-1])
    return [F.mul_int(c, inv) for c in a]


def poly_gcd(F, a, b) -> list[int]:
    a, b = poly_trim(a), poly_trim(b)
    while b:
        a, b = b, poly_mod(F, a, b)
    return poly_monic(F, a)


def poly_powmod(F, a, e: int, f) -> list[int]:
    result = [1]
    base = poly_mod(F, a, f)
    while e:
        if e & 1:
            result = poly_mod(F, poly_mul(F, result, base), f)
        e >>= 1
        if e:
            base = poly_mod(F, poly_mul(F, base, base), f)
    return result


def poly_eval(F, a, x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = F.add_int(F.mul_int(acc, x), c)
    return acc


def is_irreducible(F, f: Sequence[int]) -> bool:
    """Rabin's test for a monic ``f`` over ``F``."""
    f = poly_trim(f)
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    # x^(Q^i) mod f for i = 0..n
    frob = [x]
    for _ in range(n):
        frob.append(poly_powmod(F, frob[-1], F.q, f))
    if poly_sub(F, frob[n], x):
        return False
    for r in factorize(n):
        h = poly_sub(F, frob[n // r], x)
        if len(poly_gcd(F, h, f)) != 1:
            return False
    return True


def is_primitive(F, f: Sequence[int]) -> bool:
    """True iff the monic ``f`` is irreducible and ``x`` has order Q^n - 1 mod f.

    An element of order Q^n - 1 in (F[x]/f)^x forces the quotient to be a
    field, so irreducibility comes for free.
    """
    f = poly_trim(f)
    n = len(f) - 1
    if n < 1 or f[0] == 0:
        return False
    order = F.q**n - 1
    x = [0, 1]
    if poly_powmod(F, x, order, f) != [1]:
        return False
    for r in factorize(order) if order > 1 else {}:
        if poly_powmod(F, x, order // r, f) == [1]:
            return False
    return True


def _monic_candidates(F, n: int) -> Iterable[list[int]]:
    """Monic degree-n polynomials in increasing sum c_i Q^i order."""
    Q = F.q
    for code in range(Q**n):
        coeffs = []
        c = code
        for _ in range(n):
            coeffs.append(c % Q)
            c //= Q
        yield coeffs + [1]


def primitive_polynomial(F, n: int) -> list[int]:
    """Lexicographically smallest primitive monic polynomial of degree n over F."""
    for f in _monic_candidates(F, n):
        if f[0] != 0 and is_primitive(F, f):
            return f
    raise AssertionError(f"no primitive polynomial of degree {n} over F_{F.q}")


def irreducible_polynomials(F, n: int) -> list[list[int]]:
    return [f for f in _monic_candidates(F, n) if is_irreducible(F, f)]


# ---------------------------------------------------------------------------
# field tables


@dataclass(eq=False, frozen=True)
class FieldTable:
    """F_q with q = p^k, generator g = root of ``prim_poly``."""

    p: int
    k: int
    q: int
    prim_poly: tuple[int, ...]  # c_0..c_{k-1}; the monic x^k term is implied
    exp_table: list[int]
    log_table: list[int]  # log_table[0] == -1
    zech: list[int]  # zech[i] = log(1 + g^i), -1 when 1 + g^i == 0

    def __repr__(self) -> str:
        return f"FieldTable(q={self.q}={self.p}^{self.k}, prim_poly={list(self.prim_poly)})"

    # -- integer-representation arithmetic --------------------------------

    def add_int(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if a == 0:
            return b
        if b == 0:
            return a
        i, j = self.log_table[a], self.log_table[b]
        z = self.zech[(j - i) % (self.q - 1)]
        if z < 0:
            return 0
        return self.exp_table[(i + z) % (self.q - 1)]

    def neg_int(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        if a == 0 or self.p == 2:
            return a
        return self.exp_table[(self.log_table[a] + (self.q - 1) // 2) % (self.q - 1)]

    def sub_int(self, a: int, b: int) -> int:
        return self.add_int(a, self.neg_int(b))

    def mul_int(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp_table[(self.log_table[a] + self.log_table[b]) % (self.q - 1)]

    def inv_int(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in F_%d" % self.q)
        return self.exp_table[(-self.log_table[a]) % (self.q - 1)]

    def pow_int(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("inverse of zero")
            return 1 if e == 0 else 0
        return self.exp_table[(self.log_table[a] * e) % (self.q - 1)]

    # -- numpy tables for vectorized matrix work (small q only) ----------

    @functools.cached_property
    def add_table(self) -> np.ndarray:
        return self._table(self.add_int)

    @functools.cached_property
    def mul_table(self) -> np.ndarray:
        return self._table(self.mul_int)

    @functools.cached_property
    def neg_table(self) -> np.ndarray:
        return np.array([self.neg_int(a) for a in range(self.q)], dtype=np.int64)

    @functools.cached_property
    def inv_table(self) -> np.ndarray:
        # inv_table[0] is a placeholder 0
        return np.array([0] + [self.inv_int(a) for a in range(1, self.q)], dtype=np.int64)

    def _table(self, op) -> np.ndarray:
        if self.q > 4096:
            raise FieldError(f"operation tables requested for a large field F_{self.q}")
        t = np.empty((self.q, self.q), dtype=np.int64)
        for a in range(self.q):
            for b in range(self.q):
                t[a, b] = op(a, b)
        return t

    # -- element front end ---------------------------------------------

    def elem(self, value: int) -> FqElem:
        if not 0 <= value < self.q:
            raise FieldError(f"{value} is not an element of F_{self.q}")
        return FqElem(self, None if value == 0 else self.log_table[value])

    def zero(self) -> FqElem:
        return FqElem(self, None)

    def one(self) -> FqElem:
        return FqElem(self, 0)

    def gen(self) -> FqElem:
        return FqElem(self, 0 if self.q == 2 else 1)

    def elements(self) -> list[FqElem]:
        return [self.zero()] + [FqElem(self, e) for e in range(self.q - 1)]

    def nonzero_values(self) -> list[int]:
        return list(range(1, self.q))

    def subfield(self, d: int) -> FieldTable:
        if self.k % d:
            raise FieldError(f"F_{self.p}^{d} is not a subfield of F_{self.q}")
        return build_field(self.p, d)

    def to_json(self) -> dict:
        return {"p": self.p, "k": self.k, "prim_poly": list(self.prim_poly)}

    @staticmethod
    def from_json(data: dict) -> FieldTable:
        F = build_field(int(data["p"]), int(data["k"]))
        if "prim_poly" in data and list(data["prim_poly"]) != list(F.prim_poly):
            raise FieldError("field descriptor does not match the canonical primitive polynomial")
        return F


@functools.lru_cache(maxsize=None)
def _build(p: int, k: int) -> FieldTable:
    base = _PrimeOps(p)
    f = primitive_polynomial(base, k)
    q = p**k
    exp = [0] * (q - 1)
    if k == 1:
        g = (-f[0]) % p
        v = 1
        for i in range(q - 1):
            exp[i] = v
            v = v * g % p
    else:
        top_place = p ** (k - 1)
        # digit vector of -c_j * t for the reduction x^k = -sum c_j x^j
        red = [[(-t * c) % p for c in f[:k]] for t in range(p)]
        v = 1
        for i in range(q - 1):
            exp[i] = v
            t = v // top_place
            shifted = (v - t * top_place) * p
            if t:
                if p == 2:
                    v = shifted ^ _digits_to_int(red[1], 2)
                else:
                    digits = _int_to_digits(shifted, p, k)
                    v = _digits_to_int([(a + b) % p for a, b in zip(digits, red[t])], p)
            else:
                v = shifted
    log = [-1] * q
    for i, v in enumerate(exp):
        if log[v] != -1:
            raise AssertionError("primitive polynomial produced a short cycle")
        log[v] = i
    zech = [-1] * (q - 1)
    for i, v in enumerate(exp):
        w = v - (p - 1) if v % p == p - 1 else v + 1  # add 1 to digit 0
        zech[i] = log[w]
    return FieldTable(p, k, q, tuple(f[:k]), exp, log, zech)


def _int_to_digits(v: int, p: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        out.append(v % p)
        v //= p
    return out


def _digits_to_int(d: Sequence[int], p: int) -> int:
    v = 0
    for c in reversed(d):
        v = v * p + c
    return v


def build_field(p: int, k: int = 1, bound: int = DEFAULT_FIELD_BOUND) -> FieldTable:
    """Build (or fetch from cache) the table for F_{p^k}.

    >>> build_field(2, 4).prim_poly
    (1, 1, 0, 0)
    """
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if k < 1:
        raise FieldError("extension degree must be positive")
    if p**k > bound:
        raise FieldError(f"field size {p}^{k} exceeds bound {bound}")
    return _build(p, k)


def field_of_order(q: int, bound: int = DEFAULT_FIELD_BOUND) -> FieldTable:
    p, k = prime_power(q)
    return build_field(p, k, bound)


# ---------------------------------------------------------------------------
# scalar elements


@dataclass(frozen=True)
class FqElem:
    field: FieldTable
    exp: int | None  # None is zero

    def _check(self, other: FqElem) -> None:
        if self.field is not other.field:
            raise FieldMismatchError(f"cannot combine elements of {self.field} and {other.field}")

    @property
    def value(self) -> int:
        return 0 if self.exp is None else self.field.exp_table[self.exp]

    def is_zero(self) -> bool:
        return self.exp is None

    def __add__(self, other: FqElem) -> FqElem:
        self._check(other)
        return self.field.elem(self.field.add_int(self.value, other.value))

    def __neg__(self) -> FqElem:
        return self.field.elem(self.field.neg_int(self.value))

    def __sub__(self, other: FqElem) -> FqElem:
        return self + (-other)

    def __mul__(self, other: FqElem) -> FqElem:
        self._check(other)
        if self.exp is None or other.exp is None:
            return self.field.zero()
        return FqElem(self.field, (self.exp + other.exp) % (self.field.q - 1))

    def inverse(self) -> FqElem:
        if self.exp is None:
            raise ZeroDivisionError("inverse of zero")
        return FqElem(self.field, (-self.exp) % (self.field.q - 1))

    def __truediv__(self, other: FqElem) -> FqElem:
        self._check(other)
        return self * other.inverse()

    def __pow__(self, e: int) -> FqElem:
        if self.exp is None:
            if e < 0:
                raise ZeroDivisionError("inverse of zero")
            return self if e else self.field.one()
        return FqElem(self.field, (self.exp * e) % (self.field.q - 1))

    def order(self) -> int:
        if self.exp is None:
            raise ValueError("zero has no multiplicative order")
        return (self.field.q - 1) // math.gcd(self.exp, self.field.q - 1)

    def __repr__(self) -> str:
        return f"F{self.field.q}({self.value})"


def arith(a: FqElem, b: FqElem | None, op: str) -> FqElem:
    """Dispatch ``add``, ``mul``, ``inv`` or ``neg`` (unary ops ignore ``b``)."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inverse()
    if op == "neg":
        return -a
    raise ValueError(f"unknown field operation {op!r}")


# ---------------------------------------------------------------------------
# subfields


@functools.lru_cache(maxsize=None)
def _embedding_multiplier(sub: FieldTable, big: FieldTable) -> int:
    """Smallest u with big-generator^(m*u) a root of sub.prim_poly, m = (Q-1)/(q_s-1).

    The subfield generator is mapped there. u == 1 exactly when the two
    primitive polynomials happen to be compatible.
    """
    Q, qs = big.q, sub.q
    m = (Q - 1) // (qs - 1)
    poly = list(sub.prim_poly) + [1]  # coefficients lie in F_p, same reps in both fields
    for u in range(1, qs):
        if math.gcd(u, qs - 1) != 1 and qs > 2:
            continue
        z = big.exp_table[(m * u) % (Q - 1)]
        if poly_eval(big, poly, z) == 0:
            return u
    raise AssertionError(f"no root of the F_{qs} polynomial inside F_{Q}")


def _check_subfield(sub: FieldTable, big: FieldTable) -> None:
    if sub.p != big.p or big.k % sub.k:
        raise FieldError(f"F_{sub.q} is not a subfield of F_{big.q}")


def _as_field(F: FieldTable | int, like: FieldTable) -> FieldTable:
    # an int names the degree over the prime field of ``like``
    if isinstance(F, FieldTable):
        return F
    if F < 1:
        raise FieldError(f"degree {F} is not positive")
    return build_field(like.p, F)


def embed(a: FqElem, big: FieldTable | int) -> FqElem:
    """Field embedding F_{p^s} -> F_{p^n}; ``big`` is a table or the degree n."""
    sub = a.field
    if not isinstance(big, FieldTable) and big % sub.k:
        raise FieldError(f"degree {big} is not a multiple of {sub.k}")
    big = _as_field(big, sub)
    _check_subfield(sub, big)
    if a.exp is None:
        return big.zero()
    m = (big.q - 1) // (sub.q - 1)
    u = _embedding_multiplier(sub, big)
    return FqElem(big, (m * u * a.exp) % (big.q - 1))


def norm(beta: FqElem, sub: FieldTable | int) -> FqElem:
    """N(beta) = beta^((Q-1)/(q_s-1)) as an element of the subfield ``sub``.

    ``sub`` may be given as its degree over the prime field.
    """
    big = beta.field
    if not isinstance(sub, FieldTable) and big.k % sub:
        raise FieldError(f"{sub} does not divide {big.k}")
    sub = _as_field(sub, big)
    _check_subfield(sub, big)
    if beta.exp is None:
        return sub.zero()
    m = (big.q - 1) // (sub.q - 1)
    u = _embedding_multiplier(sub, big)
    # beta^m = G^(m * exp) = embed(g_s^i) = G^(m*u*i)  =>  i = exp / u mod (q_s - 1)
    if sub.q == 2:
        return sub.one()
    i = (beta.exp * pow(u, -1, sub.q - 1)) % (sub.q - 1)
    return FqElem(sub, i)


def from_subfield(a: FqElem, sub: FieldTable | int) -> FqElem:
    """Inverse of :func:`embed`; raises if ``a`` is not in the image."""
    big = a.field
    sub = _as_field(sub, big)
    _check_subfield(sub, big)
    if a.exp is None:
        return sub.zero()
    m = (big.q - 1) // (sub.q - 1)
    if a.exp % m:
        raise FieldError(f"{a} does not lie in F_{sub.q}")
    u = _embedding_multiplier(sub, big)
    if sub.q == 2:
        return sub.one()
    return FqElem(sub, (a.exp // m * pow(u, -1, sub.q - 1)) % (sub.q - 1))
