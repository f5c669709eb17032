"""Exact q-arithmetic and the closed-form counts for Singer cycle factorizations.

``QPoly`` is a Laurent polynomial in q with integer (or Fraction) coefficients,
``QLaurent`` a Laurent polynomial in x with ``QPoly`` coefficients, and
``QSeries`` a truncated power series in an outer variable. Nothing here uses
floating point.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Callable, Iterable, Sequence


class ExactDivisionError(ArithmeticError):
    """A division that should be exact left a remainder."""


class HypothesisError(ValueError):
    """Arguments outside the range where a formula is asserted."""


def _norm_coef(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c.numerator)
    return c


# ---------------------------------------------------------------------------
# QPoly


class QPoly:
    """Laurent polynomial sum_i coeffs[i] q^(low+i).

    >>> q = QPoly.q()
    >>> (1 + q) * (1 - q)
    QPoly(1 - q^2)
    """

    __slots__ = ("low", "coeffs")

    def __init__(self, coeffs: Sequence = (), low: int = 0):
        cs = [_norm_coef(c) for c in coeffs]
        i = 0
        while i < len(cs) and cs[i] == 0:
            i += 1
        j = len(cs)
        while j > i and cs[j - 1] == 0:
            j -= 1
        self.coeffs = tuple(cs[i:j])
        self.low = low + i if self.coeffs else 0

    # constructors
    @classmethod
    def const(cls, c) -> QPoly:
        return cls((c,))

    @classmethod
    def q(cls) -> QPoly:
        return cls((0, 1))

    @classmethod
    def monomial(cls, k: int, c=1) -> QPoly:
        return cls((c,), k)

    @staticmethod
    def coerce(x) -> QPoly:
        if isinstance(x, QPoly):
            return x
        if isinstance(x, (int, Fraction)):
            return QPoly.const(x)
        return NotImplemented

    # structure
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def high(self) -> int:
        return self.low + len(self.coeffs) - 1

    def degree(self) -> int:
        if not self.coeffs:
            raise ValueError("zero polynomial has no degree")
        return self.high

    def is_polynomial(self) -> bool:
        return self.low >= 0 or not self.coeffs

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.coeffs)

    def coeff(self, k: int):
        i = k - self.low
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __iter__(self):
        return ((self.low + i, c) for i, c in enumerate(self.coeffs))

    # arithmetic
    def __add__(self, other):
        other = QPoly.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.coeffs:
            return other
        if not other.coeffs:
            return self
        lo = min(self.low, other.low)
        hi = max(self.high, other.high)
        return QPoly([self.coeff(k) + other.coeff(k) for k in range(lo, hi + 1)], lo)

    __radd__ = __add__

    def __neg__(self):
        return QPoly([-c for c in self.coeffs], self.low)

    def __sub__(self, other):
        other = QPoly.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return QPoly.coerce(other) - self

    def __mul__(self, other):
        other = QPoly.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return QPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return QPoly(out, self.low + other.low)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> QPoly:
        if e < 0:
            if len(self.coeffs) == 1:
                c = self.coeffs[0]
                return QPoly((Fraction(1, 1) / c,), -self.low) ** (-e)
            raise ExactDivisionError("negative power of a non-monomial")
        result = QPoly.const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        other = QPoly.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.low == other.low and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.low, self.coeffs))

    def shift(self, k: int) -> QPoly:
        """Multiply by q^k."""
        return QPoly(self.coeffs, self.low + k)

    def divmod_poly(self, other: QPoly) -> tuple[QPoly, QPoly]:
        """Division with remainder after clearing both low exponents (coefficients over Q)."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        a = list(self.coeffs)
        b = other.coeffs
        lead = b[-1]
        if len(a) < len(b):
            return QPoly(), QPoly(a, self.low)
        quo = [0] * (len(a) - len(b) + 1)
        for k in range(len(quo) - 1, -1, -1):
            c = a[k + len(b) - 1]
            if c:
                f = Fraction(c, lead) if isinstance(c, int) and isinstance(lead, int) else c / lead
                f = _norm_coef(f)
                quo[k] = f
                for j, bj in enumerate(b):
                    a[k + j] -= f * bj
        return QPoly(quo, self.low - other.low), QPoly(a[: len(b) - 1], self.low)

    def exact_div(self, other) -> QPoly:
        """Quotient of an exact division; raises :class:`ExactDivisionError` otherwise."""
        other = QPoly.coerce(other)
        if self.is_zero():
            return QPoly()
        quo, rem = self.divmod_poly(other)
        if not rem.is_zero():
            raise ExactDivisionError(f"{other} does not divide {self}")
        return quo

    def __floordiv__(self, other):
        return self.exact_div(other)

    def eval(self, value):
        """Evaluate at q = value (int or Fraction); exact."""
        if self.low < 0 and value == 0:
            raise ZeroDivisionError("Laurent polynomial at q = 0")
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * value + c
        if self.low >= 0:
            return _norm_coef(acc * value**self.low)
        return _norm_coef(Fraction(acc) / Fraction(value) ** (-self.low))

    def subs_power(self, s: int) -> QPoly:
        """q -> q^s."""
        if not self.coeffs:
            return self
        out = [0] * ((len(self.coeffs) - 1) * s + 1)
        for i, c in enumerate(self.coeffs):
            out[i * s] = c
        return QPoly(out, self.low * s)

    def content_primitive(self) -> tuple[Fraction, QPoly]:
        """Split self = c * p with p integral, primitive and positive leading coefficient."""
        if self.is_zero():
            return Fraction(0), self
        den = 1
        for c in self.coeffs:
            if isinstance(c, Fraction):
                den = den * c.denominator // math.gcd(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for c in ints:
            g = math.gcd(g, c)
        if ints[-1] < 0:
            g = -g
        return Fraction(g, den), QPoly([c // g for c in ints], self.low)

    def to_json(self) -> dict:
        return {"min_exponent": self.low, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> QPoly:
        return cls([_parse_number(c) for c in data["coeffs"]], int(data.get("min_exponent", 0)))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in self:
            if c == 0:
                continue
            mono = "" if k == 0 else ("q" if k == 1 else f"q^{k}")
            mag = abs(c)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{mag}*{mono}"
            else:
                body = str(mag)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self) -> str:
        return f"QPoly({self})"


def _parse_number(s: str):
    f = Fraction(s)
    return _norm_coef(f)


def qpoly_gcd(a: QPoly, b: QPoly) -> QPoly:
    """Monic-up-to-content gcd over Q[q, 1/q], returned primitive with low exponent 0."""
    a = QPoly(a.coeffs)
    b = QPoly(b.coeffs)
    while not b.is_zero():
        a, b = b, a.divmod_poly(b)[1]
        b = QPoly(b.coeffs)
    if a.is_zero():
        return a
    return a.content_primitive()[1]


Q = QPoly.q()
ONE = QPoly.const(1)
ZERO = QPoly()


# ---------------------------------------------------------------------------
# rational functions in q


class QRational:
    """num/den with both QPoly; reduced by gcd and content."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=ONE):
        num, den = QPoly.coerce(num), QPoly.coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = ZERO, ONE
            return
        g = qpoly_gcd(num, den)
        if g.degree() > 0:
            num, den = num.exact_div(g), den.exact_div(g)
        cd, pd = den.content_primitive()
        num = num * QPoly.const(Fraction(1) / cd)
        shift = pd.low
        self.num = num.shift(-shift)
        self.den = pd.shift(-shift)

    @staticmethod
    def coerce(x) -> QRational:
        if isinstance(x, QRational):
            return x
        return QRational(QPoly.coerce(x))

    def __add__(self, other):
        o = QRational.coerce(other)
        return QRational(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return QRational(-self.num, self.den)

    def __sub__(self, other):
        return self + (-QRational.coerce(other))

    def __rsub__(self, other):
        return QRational.coerce(other) - self

    def __mul__(self, other):
        o = QRational.coerce(other)
        return QRational(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = QRational.coerce(other)
        return QRational(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return QRational.coerce(other) / self

    def __pow__(self, e: int):
        if e < 0:
            return QRational(self.den**(-e), self.num**(-e))
        return QRational(self.num**e, self.den**e)

    def __eq__(self, other):
        o = QRational.coerce(other)
        return self.num * o.den == o.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def to_qpoly(self) -> QPoly:
        return self.num.exact_div(self.den)

    def eval(self, value):
        d = self.den.eval(value)
        if d == 0:
            raise ZeroDivisionError("pole at the evaluation point")
        return _norm_coef(Fraction(self.num.eval(value)) / d)

    def __repr__(self) -> str:
        return f"QRational(({self.num}) / ({self.den}))"


# ---------------------------------------------------------------------------
# basic q-analogues


def q_int(n: int) -> QPoly:
    """[n]_q.

    >>> q_int(3)
    QPoly(1 + q + q^2)
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    return QPoly([1] * n)


@lru_cache(maxsize=None)
def q_fact(n: int) -> QPoly:
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = ONE
    for i in range(1, n + 1):
        out = out * q_int(i)
    return out


@lru_cache(maxsize=None)
def q_binom(n: int, k: int) -> QPoly:
    """Gaussian binomial [n choose k]_q (exact division of q-factorials)."""
    if n < 0 or k < 0:
        raise ValueError("arguments must be nonnegative")
    if k > n:
        raise ValueError(f"q_binom({n}, {k}) needs k <= n")
    return q_fact(n).exact_div(q_fact(k) * q_fact(n - k))


def q_binom0(n: int, k: int) -> QPoly:
    """Gaussian binomial extended by zero outside 0 <= k <= n."""
    if n < 0 or k < 0 or k > n:
        return ZERO
    return q_binom(n, k)


def pochhammer(a: QPoly | int, n: int, base: QPoly = Q) -> QPoly:
    """(a; base)_n = prod_{i<n} (1 - a base^i)."""
    a = QPoly.coerce(a)
    out = ONE
    p = ONE
    for _ in range(n):
        out = out * (ONE - a * p)
        p = p * base
    return out


def q_poch_q(n: int) -> QPoly:
    """(q;q)_n."""
    return pochhammer(Q, n)


def q_basics(kind: str, n: int, k: int | None = None) -> QPoly:
    """Dispatch ``q_int``, ``q_fact``, ``q_binom`` and ``pochhammer`` ((q;q)_n)."""
    if kind == "q_int":
        return q_int(n)
    if kind == "q_fact":
        return q_fact(n)
    if kind == "q_binom":
        return q_binom(n, k)
    if kind == "pochhammer":
        return q_poch_q(n)
    raise ValueError(f"unknown kind {kind!r}")


def choose2(n: int) -> int:
    return n * (n - 1) // 2


def gl_order_poly(n: int) -> QPoly:
    """|GL_n(F_q)| = q^C(n,2) prod (q^i - 1)."""
    out = Q ** choose2(n)
    for i in range(1, n + 1):
        out = out * (Q**i - 1)
    return out


# ---------------------------------------------------------------------------
# Laurent polynomials in x


class QLaurent:
    """sum_A coeff[A] x^A with QPoly (or QRational) coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {a: c for a, c in (terms or {}).items() if not c.is_zero()}

    @classmethod
    def monomial(cls, a: int, c=ONE) -> QLaurent:
        return cls({a: QPoly.coerce(c) if not isinstance(c, QRational) else c})

    @classmethod
    def x(cls) -> QLaurent:
        return cls.monomial(1)

    @classmethod
    def const(cls, c) -> QLaurent:
        return cls.monomial(0, c)

    @staticmethod
    def coerce(v) -> QLaurent:
        if isinstance(v, QLaurent):
            return v
        return QLaurent.const(v)

    def __add__(self, other):
        o = QLaurent.coerce(other)
        t = dict(self.terms)
        for a, c in o.terms.items():
            t[a] = t[a] + c if a in t else c
        return QLaurent(t)

    __radd__ = __add__

    def __neg__(self):
        return QLaurent({a: -c for a, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-QLaurent.coerce(other))

    def __rsub__(self, other):
        return QLaurent.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, QLaurent):
            c = other
            return QLaurent({a: v * c for a, v in self.terms.items()})
        t: dict = {}
        for a, c in self.terms.items():
            for b, d in other.terms.items():
                t[a + b] = t[a + b] + c * d if a + b in t else c * d
        return QLaurent(t)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> QLaurent:
        if e < 0:
            raise ValueError("negative powers are not supported")
        result = QLaurent.const(ONE)
        for _ in range(e):
            result = result * self
        return result

    def __eq__(self, other):
        o = QLaurent.coerce(other)
        keys = set(self.terms) | set(o.terms)
        return all(self.coeff(a) == o.coeff(a) for a in keys)

    def coeff(self, a: int):
        return self.terms.get(a, ZERO)

    def is_zero(self) -> bool:
        return not self.terms

    def shift(self, k: int) -> QLaurent:
        """Multiply by x^k."""
        return QLaurent({a + k: c for a, c in self.terms.items()})

    def subs_qx(self, j: int = 1) -> QLaurent:
        """x -> q^j x."""
        return QLaurent({a: c * Q ** (j * a) for a, c in self.terms.items()})

    def map_coeffs(self, f: Callable) -> QLaurent:
        return QLaurent({a: f(c) for a, c in self.terms.items()})

    def eval_at_one(self):
        """Value at x = 1."""
        acc = ZERO
        for c in self.terms.values():
            acc = acc + c
        return acc

    def to_json(self) -> dict:
        if not self.terms:
            return {"min_exponent": 0, "coeffs": []}
        lo, hi = min(self.terms), max(self.terms)
        return {
            "min_exponent": lo,
            "coeffs": [self.coeff(a).to_json() for a in range(lo, hi + 1)],
        }

    def __repr__(self) -> str:
        body = " + ".join(f"({c})*x^{a}" for a, c in sorted(self.terms.items()))
        return f"QLaurent({body or '0'})"


def delta_q(f: QLaurent, times: int = 1) -> QLaurent:
    """N-fold q-difference operator (f(x) - f(qx)) / (x - qx), one step at a time."""
    if times < 0:
        raise ValueError("times must be nonnegative")
    one_minus_q = ONE - Q
    for _ in range(times):
        diff = f - f.subs_qx(1)
        f = diff.shift(-1).map_coeffs(lambda c: _exact_div_coeff(c, one_minus_q))
    return f


def _exact_div_coeff(c, d: QPoly):
    if isinstance(c, QRational):
        return c / d
    return c.exact_div(d)


def delta_q_closed(f: QLaurent, n: int) -> QLaurent:
    """The closed iterate: q^-C(n,2) x^-n (1-q)^-n sum_k (-1)^(n-k) q^C(k,2) [n k]_q f(q^(n-k) x)."""
    acc = QLaurent()
    for k in range(n + 1):
        coef = QPoly.const((-1) ** (n - k)) * Q ** choose2(k) * q_binom(n, k)
        acc = acc + f.subs_qx(n - k) * coef
    den = Q ** choose2(n) * (ONE - Q) ** n
    return acc.shift(-n).map_coeffs(lambda c: _exact_div_coeff(c, den))


def delta_at_one_power(A: int, N: int) -> QPoly:
    """[Delta_q^N x^A]_{x=1} = (q^(A-N+1); q)_N / (1-q)^N."""
    return pochhammer(Q ** (A - N + 1), N).exact_div((ONE - Q) ** N)


def q_binomial_theorem_sides(N: int) -> tuple[QLaurent, QLaurent]:
    """Both sides of (x;q)_N = sum_k (-x)^k q^C(k,2) [N k]_q as Laurent polynomials in x."""
    left = QLaurent.const(ONE)
    for i in range(N):
        left = left * (QLaurent.const(ONE) - QLaurent.monomial(1, Q**i))
    right = QLaurent()
    for k in range(N + 1):
        right = right + QLaurent.monomial(k, QPoly.const((-1) ** k) * Q ** choose2(k) * q_binom(N, k))
    return left, right


# ---------------------------------------------------------------------------
# t_q(n, l)


def _check_n(n: int) -> None:
    if n < 2:
        raise HypothesisError("the formulas for t_q(n, l) assume n >= 2")


def tq_sum(n: int, ell: int) -> QPoly:
    """Sum over hooks: (-[n])^l / (q^C(n,2) (q;q)_n) * (...)."""
    _check_n(n)
    inner = QPoly.const((-1) ** (n - 1)) * q_poch_q(n - 1)
    for k in range(n):
        term = 1 + Q ** (n - k - 1) - Q ** (n - k)
        inner = inner + QPoly.const((-1) ** (k + n)) * Q ** choose2(k + 1) * q_binom(n - 1, k) * term**ell
    num = (-q_int(n)) ** ell * inner
    return num.exact_div(Q ** choose2(n) * q_poch_q(n))


def tq_diff(n: int, ell: int) -> QPoly:
    """q-difference route: (1-q)^-1 (-[n])^l / [n]! [Delta_q^(n-1)(1/x - (1+x(1-q))^l / x)]_{x=1}."""
    _check_n(n)
    lin = QLaurent({0: ONE, 1: ONE - Q})
    f = QLaurent.monomial(-1) - (lin**ell).shift(-1)
    val = delta_q(f, n - 1).eval_at_one()
    return ((-q_int(n)) ** ell * val).exact_div((ONE - Q) * q_fact(n))


def tq_binom(n: int, ell: int) -> QPoly:
    """[n]^(l-1) sum_{i=0}^{l-n} (-1)^i (q-1)^(l-i-1) C(l,i) [l-i-1 choose n-1]_q."""
    _check_n(n)
    if ell < n:
        return ZERO
    acc = ZERO
    for i in range(ell - n + 1):
        acc = acc + QPoly.const((-1) ** i * math.comb(ell, i)) * (Q - 1) ** (ell - i - 1) * q_binom(
            ell - i - 1, n - 1
        )
    return q_int(n) ** (ell - 1) * acc


TQ_ROUTES = {"sum": tq_sum, "diff": tq_diff, "binom": tq_binom}


class RouteMismatch(AssertionError):
    pass


def tq(n: int, ell: int, route: str = "binom", check: bool = True) -> QPoly:
    """t_q(n, l) via one route; with ``check`` all three routes must agree."""
    if ell < 0:
        raise ValueError("l must be nonnegative")
    if route not in TQ_ROUTES:
        raise ValueError(f"unknown route {route!r}; choose from {sorted(TQ_ROUTES)}")
    val = TQ_ROUTES[route](n, ell)
    if check:
        for name, fn in TQ_ROUTES.items():
            if name != route and fn(n, ell) != val:
                raise RouteMismatch(f"t_q({n},{ell}): route {name} disagrees with {route}")
    return val


def tq_nlm_binom(n: int, ell: int, m: int) -> QPoly:
    _check_m(n, ell, m)
    acc = ZERO
    for i in range(min(m, ell - n) + 1):
        acc = acc + QPoly.const((-1) ** i * math.comb(m, i)) * q_binom0(ell - i - 1, n - 1)
    return q_int(n) ** (ell - 1) * acc


def tq_nlm_diff(n: int, ell: int, m: int) -> QPoly:
    _check_m(n, ell, m)
    f = (QLaurent({0: -ONE, 1: ONE}) ** m).shift(ell - m - 1)
    val = delta_q(f, n - 1).eval_at_one()
    return (q_int(n) ** ell * val).exact_div(q_fact(n))


def _check_m(n: int, ell: int, m: int) -> None:
    if n < 1:
        raise HypothesisError("n must be positive")
    if not 0 <= m <= ell - 1:
        raise HypothesisError(
            f"t_q(n,l,m) needs 0 <= m <= l-1 (a Singer cycle has det != 1, so some factor "
            f"is semisimple); got l={ell}, m={m}"
        )


TQ_NLM_ROUTES = {"binom": tq_nlm_binom, "diff": tq_nlm_diff}


def tq_nlm(n: int, ell: int, m: int, route: str = "binom", check: bool = True) -> QPoly:
    """t_q(n, l, m): factorizations with a fixed det sequence having m ones."""
    if route not in TQ_NLM_ROUTES:
        raise ValueError(f"unknown route {route!r}")
    val = TQ_NLM_ROUTES[route](n, ell, m)
    if check:
        for name, fn in TQ_NLM_ROUTES.items():
            if name != route and fn(n, ell, m) != val:
                raise RouteMismatch(f"t_q({n},{ell},{m}): route {name} disagrees with {route}")
    return val


def sequence_weight(N: int) -> QPoly:
    """((q-2)^N - (-1)^N) / (q-1): det sequences in (F_q^x minus 1)^N with fixed product != 1."""
    return ((Q - 2) ** N - QPoly.const((-1) ** N)).exact_div(Q - 1)


def aggregate_identity(n: int, ell: int, witness: bool = False):
    """t_q(n,l) == sum_m t_q(n,l,m) C(l,m) ((q-2)^(l-m) - (-1)^(l-m)) / (q-1)."""
    lhs = tq(n, ell, check=False)
    rhs = ZERO
    for m in range(ell):  # the m = l weight vanishes
        rhs = rhs + tq_nlm(n, ell, m, check=False) * math.comb(ell, m) * sequence_weight(ell - m)
    ok = lhs == rhs
    if witness:
        return ok, {"lhs": lhs.to_json(), "rhs": rhs.to_json()}
    return ok


def tq_q2_character_form(n: int, ell: int) -> int:
    """t_2(n,l) from the q = 2 character computation, evaluated exactly at q = 2."""
    qq = 2
    qi = sum(qq**i for i in range(n))
    poch = 1
    for i in range(1, n):
        poch *= 1 - qq**i
    total = -((-qi) ** ell) * poch
    for k in range(n):
        total += (
            qq ** choose2(k + 1)
            * q_binom(n - 1, k).eval(qq)
            * (-1) ** k
            * qi**ell
            * (qq ** (n - k) - qq ** (n - k - 1) - 1) ** ell
        )
    order = gl_order_poly(n).eval(qq)
    if total % order:
        raise ExactDivisionError("q = 2 character sum is not divisible by |GL_n|")
    return total // order


# ---------------------------------------------------------------------------
# series


class QSeries:
    """Truncated power series sum_{i < order} coeffs[i] u^i; coefficients QPoly/QRational/Fraction."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Sequence, order: int):
        cs = list(coeffs)[:order]
        zero = _zero_like(cs[0]) if cs else 0
        cs += [zero] * (order - len(cs))
        self.coeffs = cs
        self.order = order

    def __add__(self, other: QSeries) -> QSeries:
        o = min(self.order, other.order)
        return QSeries([a + b for a, b in zip(self.coeffs[:o], other.coeffs[:o])], o)

    def __sub__(self, other: QSeries) -> QSeries:
        o = min(self.order, other.order)
        return QSeries([a - b for a, b in zip(self.coeffs[:o], other.coeffs[:o])], o)

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            return QSeries([c * other for c in self.coeffs], self.order)
        o = min(self.order, other.order)
        out = []
        for k in range(o):
            acc = None
            for i in range(k + 1):
                t = self.coeffs[i] * other.coeffs[k - i]
                acc = t if acc is None else acc + t
            out.append(acc)
        return QSeries(out, o)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> QSeries:
        result = QSeries([self.coeffs[0] * 0 + 1], self.order)
        for _ in range(e):
            result = result * self
        return result

    def __getitem__(self, i: int):
        return self.coeffs[i]


def _zero_like(c):
    if isinstance(c, QPoly):
        return ZERO
    if isinstance(c, QRational):
        return QRational(ZERO)
    return 0


def geometric(a: QPoly, order: int) -> QSeries:
    """1 / (1 + a x) = sum_j (-a)^j x^j."""
    return QSeries([(-a) ** j for j in range(order)], order)


def ogf_series(n: int, order: int) -> QSeries:
    """Product side of the ordinary generating function, expanded in x."""
    _check_n(n)
    N = q_int(n)
    s = QSeries([ZERO] * n + [(Q**n - 1) ** (n - 1)], order)
    s = s * geometric(N, order)
    for k in range(n):
        s = s * geometric(N * (1 + Q**k - Q ** (k + 1)), order)
    return s


def partial_fraction_sides(n: int) -> tuple[QLaurent, QLaurent]:
    """Partial-fraction identity with all denominators cleared (polynomials in x and q).

    Multiplying by W = q^C(n,2) (q^n - 1) (q;q)_{n-1} and by the product of the
    linear factors D_* = 1 + x[n], E_k = 1 + x[n](1 + q^(n-k-1) - q^(n-k)).
    """
    _check_n(n)
    N = q_int(n)
    x = QLaurent.x()
    d_star = QLaurent.const(ONE) + x * N
    E = [QLaurent.const(ONE) + x * (N * (1 + Q ** (n - k - 1) - Q ** (n - k))) for k in range(n)]
    lhs = QLaurent.monomial(n, (Q**n - 1) ** (n - 1) * Q ** choose2(n) * (Q**n - 1) * q_poch_q(n - 1))
    prod_e = QLaurent.const(ONE)
    for e in E:
        prod_e = prod_e * e
    rhs = prod_e * q_poch_q(n - 1)
    for k in range(n):
        others = QLaurent.const(ONE)
        for j, e in enumerate(E):
            if j != k:
                others = others * e
        coef = QPoly.const((-1) ** (k + 1)) * Q ** choose2(k + 1) * q_binom(n - 1, k)
        rhs = rhs + d_star * others * coef
    rhs = rhs * QPoly.const((-1) ** n)
    return lhs, rhs


def ogf_check(n: int, ell_max: int | None = None, witness: bool = False):
    """Series coefficients of the product form equal t_q(n,l) for l <= ell_max, and the
    cleared partial-fraction identity holds."""
    if ell_max is None:
        ell_max = n + 6
    s = ogf_series(n, ell_max + 1)
    bad = [ell for ell in range(ell_max + 1) if s[ell] != tq(n, ell, check=False)]
    lhs, rhs = partial_fraction_sides(n)
    ok = not bad and lhs == rhs
    if witness:
        return ok, {"mismatched_ell": bad, "partial_fraction": lhs == rhs}
    return ok


def egf_coefficients(n: int, ell_max: int) -> list[QPoly]:
    """l! [u^l] of (q-1)^(n-1) q^C(n,2) / |W| e^(-u N_hyp) [Delta_q^(n-1)((e^(u x K) - 1) / x)]_{x=1}.

    Here K = (N_ref + N_hyp) / q^(n-1) = q^n - 1; the bracket is expanded in u
    with Delta_q applied to each Laurent coefficient.
    """
    _check_n(n)
    order = ell_max + 1
    N_hyp = q_int(n)
    N_ref = q_int(n) * (Q**n - Q ** (n - 1) - 1)
    K = (N_ref + N_hyp).exact_div(Q ** (n - 1))
    expo = QSeries([(-N_hyp) ** i * Fraction(1, math.factorial(i)) for i in range(order)], order)
    bracket = [ZERO]
    for j in range(1, order):
        lam = QLaurent.monomial(j - 1, K**j * Fraction(1, math.factorial(j)))
        bracket.append(delta_q(lam, n - 1).eval_at_one())
    series = expo * QSeries(bracket, order)
    pref = (Q - 1) ** (n - 1) * Q ** choose2(n)
    W = gl_order_poly(n)
    return [(series[ell] * pref * math.factorial(ell)).exact_div(W) for ell in range(order)]


def classical_t(n: int, ell: int) -> int:
    """Factorizations of an n-cycle into l transpositions (difference formula)."""
    if n < 1 or ell < 0:
        raise ValueError("need n >= 1 and l >= 0")
    total = Fraction(0)
    for k in range(n):
        total += (-1) ** k * math.comb(n - 1, k) * (Fraction(n - 1, 2) - k) ** ell
    total *= Fraction(n**ell, math.factorial(n))
    if total.denominator != 1:
        raise ExactDivisionError("classical count is not an integer")
    return int(total)


def classical_ogf_coefficients(n: int, ell_max: int) -> list[int]:
    """Coefficients of n^(n-2) x^(n-1) prod_k (1 - x n ((n-1)/2 - k))^-1."""
    order = ell_max + 1
    s = QSeries([Fraction(0)] * (n - 1) + [Fraction(n) ** (n - 2)], order)
    for k in range(n):
        a = -n * (Fraction(n - 1, 2) - k)
        s = s * QSeries([(-a) ** j for j in range(order)], order)
    out = []
    for c in s.coeffs:
        c = Fraction(c)
        if c.denominator != 1:
            raise ExactDivisionError("non-integral coefficient")
        out.append(int(c))
    return out


def classical_egf_coefficients(n: int, ell_max: int) -> list[int]:
    """l! [u^l] of (e^(un/2) - e^(-un/2))^(n-1) / n!."""
    order = ell_max + 1
    half = Fraction(n, 2)
    diff = QSeries(
        [(half**i - (-half) ** i) / math.factorial(i) for i in range(order)], order
    )
    s = diff ** (n - 1)
    out = []
    for ell in range(order):
        c = Fraction(s[ell]) * math.factorial(ell) / math.factorial(n)
        if c.denominator != 1:
            raise ExactDivisionError("non-integral coefficient")
        out.append(int(c))
    return out


def egf_check(n: int, ell_max: int | None = None, witness: bool = False):
    """EGF coefficients equal t_q(n,l), and the classical EGF matches classical_t."""
    if ell_max is None:
        ell_max = n + 6
    coeffs = egf_coefficients(n, ell_max)
    bad = [ell for ell in range(ell_max + 1) if coeffs[ell] != tq(n, ell, check=False)]
    classical = classical_egf_coefficients(n, ell_max)
    bad_classical = [ell for ell in range(ell_max + 1) if classical[ell] != classical_t(n, ell)]
    ok = not bad and not bad_classical
    if witness:
        return ok, {"mismatched_ell": bad, "classical_mismatch": bad_classical}
    return ok


# ---------------------------------------------------------------------------
# q -> 1


def q1_limit(n: int, ell: int, m: int | None = None):
    """lim_{q->1} t_q(n,l)/(1-q)^(n-1), or t_q(n,l,m) at q = 1 when m is given."""
    _check_n(n)
    if m is not None:
        return tq_nlm(n, ell, m, check=False).eval(1)
    return tq(n, ell, check=False).exact_div((ONE - Q) ** (n - 1)).eval(1)


def q1_closed(n: int, ell: int, m: int | None = None) -> int:
    if m is None:
        return (-n) ** (ell - 1) * math.comb(ell, n) if ell >= 1 else 0
    return n ** (ell - 1) * math.comb(ell - m - 1, ell - n) if ell - n >= 0 else 0


q1_limits = q1_limit


# ---------------------------------------------------------------------------
# cyclotomic orbit sums


def _int_poly_mod(a: list[int], m: list[int]) -> list[int]:
    """Remainder of integer polynomials, m monic (coefficients low to high)."""
    a = list(a)
    dm = len(m) - 1
    for k in range(len(a) - 1, dm - 1, -1):
        c = a[k]
        if c:
            for j in range(dm + 1):
                a[k - dm + j] -= c * m[j]
    a = a[:dm] if len(a) > dm else a
    while a and a[-1] == 0:
        a.pop()
    return a


@lru_cache(maxsize=None)
def cyclotomic_poly(M: int) -> tuple[int, ...]:
    """Phi_M with integer coefficients (low to high)."""
    num = [-1] + [0] * (M - 1) + [1]  # x^M - 1
    for d in range(1, M):
        if M % d == 0:
            num = _int_poly_div(num, list(cyclotomic_poly(d)))
    return tuple(num)


def _int_poly_div(a: list[int], b: list[int]) -> list[int]:
    a = list(a)
    db = len(b) - 1
    quo = [0] * (len(a) - db)
    for k in range(len(quo) - 1, -1, -1):
        c = a[k + db]
        quo[k] = c
        if c:
            for j in range(db + 1):
                a[k + j] -= c * b[j]
    if any(a[:db]):
        raise ExactDivisionError("cyclotomic division left a remainder")
    return quo


def free_frobenius_orbits(q: int, s: int) -> list[list[int]]:
    """Orbits of a -> q a on Z/(q^s - 1) having exactly s elements."""
    M = q**s - 1
    seen = [False] * M
    out = []
    for a in range(M):
        if seen[a]:
            continue
        orb = []
        b = a
        while not seen[b]:
            seen[b] = True
            orb.append(b)
            b = b * q % M
        if len(orb) == s:
            out.append(orb)
    return out


def cyclotomic_orbit_sum(q: int, s: int, d: int) -> int:
    """Sum over characters phi of F_{q^s}^x with free Frobenius orbit of phi(beta), ord(beta) = d.

    Equivalently, summing over cuspidal characters U, the inner sum over the
    Frobenius orbit of beta. Computed in Z[x]/Phi_M, M = q^s - 1; the result
    is asserted to be an integer.
    """
    M = q**s - 1
    if d < 1 or M % d:
        raise ValueError(f"d = {d} does not divide q^s - 1 = {M}")
    e = M // d  # beta = g^e for a generator g
    vec = [0] * M  # exponent vector modulo x^M - 1
    for orb in free_frobenius_orbits(q, s):
        for a in orb:
            vec[a * e % M] += 1
    if M == 1:
        return vec[0]
    red = _int_poly_mod(vec, list(cyclotomic_poly(M)))
    if any(red[1:]):
        raise AssertionError(f"orbit sum is not rational: {red}")
    return red[0] if red else 0


def mobius(n: int) -> int:
    from .gf import mobius as _mu

    return _mu(n)
