"""Partitions, q-hook formulas and the hook-character data behind the counts.

Characters of GL_1(F_q) = F_q^x are written U_u(alpha) = zeta^(u * log alpha)
with zeta a primitive (q-1)-th root of unity, so every value below is a QPoly
times a symbolic phase exponent modulo q-1.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator

from .gf import build_field, divisors, field_of_order
from .qformula import (
    ONE,
    Q,
    ZERO,
    QPoly,
    choose2,
    cyclotomic_orbit_sum,
    gl_order_poly,
    pochhammer,
    q_binom,
    q_int,
    q_poch_q,
)


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        if any(p <= 0 for p in self.parts):
            raise ValueError("parts must be positive")
        if any(a < b for a, b in zip(self.parts, self.parts[1:])):
            raise ValueError("parts must be weakly decreasing")

    @classmethod
    def of(cls, *parts: int) -> Partition:
        return cls(tuple(sorted(parts, reverse=True)))

    @property
    def size(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    @cached_property
    def conjugate(self) -> Partition:
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for p in self.parts if p > j) for j in range(self.parts[0])))

    def n_lambda(self) -> int:
        """n(lambda) = sum (i-1) lambda_i."""
        return sum(i * p for i, p in enumerate(self.parts))

    def cells(self) -> Iterator[tuple[int, int]]:
        for i, p in enumerate(self.parts):
            for j in range(p):
                yield i, j

    def hook(self, i: int, j: int) -> int:
        return self.parts[i] + self.conjugate.parts[j] - (i + j) - 1

    def content(self, i: int, j: int) -> int:
        return j - i

    def corners(self) -> list[int]:
        """Rows whose last cell can be removed."""
        return [i for i, p in enumerate(self.parts) if i + 1 == len(self.parts) or self.parts[i + 1] < p]

    def remove_corner(self, i: int) -> Partition:
        parts = list(self.parts)
        parts[i] -= 1
        return Partition(tuple(p for p in parts if p))

    def is_hook(self) -> bool:
        return len(self.parts) <= 1 or self.parts[1] <= 1

    def to_json(self) -> list[int]:
        return list(self.parts)


def hook_shape(n: int, k: int) -> Partition:
    """(n-k, 1^k)."""
    if not 0 <= k <= n - 1:
        raise ValueError(f"hook index {k} out of range for n = {n}")
    return Partition((n - k,) + (1,) * k)


def partitions(n: int, max_part: int | None = None) -> Iterator[Partition]:
    if max_part is None:
        max_part = n
    if n == 0:
        yield Partition(())
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first):
            yield Partition((first,) + rest.parts)


# ---------------------------------------------------------------------------
# f^lambda(q)


def _f_product(lam: Partition) -> QPoly:
    den = ONE
    for i, j in lam.cells():
        den = den * (ONE - Q ** lam.hook(i, j))
    return (q_poch_q(lam.size) * Q ** lam.n_lambda()).exact_div(den)


def q_multinomial(parts: tuple[int, ...]) -> QPoly:
    n = sum(parts)
    out = ONE
    for a in parts:
        out = out * q_binom(n, a)
        n -= a
    return out


def _f_principal(lam: Partition) -> QPoly:
    """(q;q)_n s_lambda(1, q, q^2, ...) via Jacobi-Trudi with h_r -> 1/(q;q)_r."""
    ell = len(lam)
    acc = ZERO
    for perm in itertools.permutations(range(ell)):
        a = tuple(lam.parts[i] - i + perm[i] for i in range(ell))
        if any(x < 0 for x in a):
            continue
        sign = _perm_sign(perm)
        acc = acc + q_multinomial(a) * sign
    return acc


def _perm_sign(perm: tuple[int, ...]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def standard_tableaux(lam: Partition) -> Iterator[list[tuple[int, int]]]:
    """Standard Young tableaux as the list of cells holding 1, 2, ..., n."""
    n = lam.size
    filled = [0] * len(lam)
    path: list[tuple[int, int]] = []

    def rec():
        if len(path) == n:
            yield list(path)
            return
        for i in range(len(lam)):
            j = filled[i]
            if j < lam.parts[i] and (i == 0 or filled[i - 1] > j):
                filled[i] += 1
                path.append((i, j))
                yield from rec()
                path.pop()
                filled[i] -= 1

    yield from rec()


def maj(tableau: list[tuple[int, int]]) -> int:
    """Sum of i such that i + 1 lies in a strictly lower row than i."""
    return sum(i + 1 for i in range(len(tableau) - 1) if tableau[i + 1][0] > tableau[i][0])


def _f_maj(lam: Partition) -> QPoly:
    counts: dict[int, int] = {}
    for t in standard_tableaux(lam):
        m = maj(t)
        counts[m] = counts.get(m, 0) + 1
    top = max(counts)
    return QPoly([counts.get(i, 0) for i in range(top + 1)])


F_ROUTES = {"product": _f_product, "principal_spec": _f_principal, "maj_sum": _f_maj}


@lru_cache(maxsize=None)
def f_lambda(lam: Partition, route: str = "product") -> QPoly:
    """f^lambda(q) = (q;q)_n q^n(lambda) / prod (1 - q^h(a)).

    >>> f_lambda(Partition((2, 1)), "maj_sum")
    QPoly(q + q^2)
    """
    if lam.size < 1:
        raise ValueError("empty partition")
    if route not in F_ROUTES:
        raise ValueError(f"unknown route {route!r}")
    return F_ROUTES[route](lam)


# ---------------------------------------------------------------------------
# hook characters


def hook_degree(n: int, s: int, k: int) -> tuple[int, QPoly]:
    """Degree of the primary hook character for (s, k): (sign, polynomial)."""
    if s < 1 or n % s:
        raise ValueError(f"s = {s} does not divide n = {n}")
    r = n // s
    if not 0 <= k <= r - 1:
        raise ValueError(f"k = {k} out of range 0..{r - 1}")
    sign = (-1) ** (n - r)
    qs = Q**s
    poly = (
        Q ** (s * choose2(k + 1))
        * q_poch_q(n).exact_div(pochhammer(qs, r, base=qs))
        * q_binom(r - 1, k).subs_power(s)
    )
    return sign, poly


def content_identity(lam: Partition) -> bool:
    """[n] sum_{mu = lam - corner} f^mu == f^lam sum_{a in lam} q^c(a)."""
    n = lam.size
    if n < 1:
        raise ValueError("empty partition")
    lhs = ZERO
    for i in lam.corners():
        mu = lam.remove_corner(i)
        lhs = lhs + (f_lambda(mu) if mu.size else ONE)
    lhs = lhs * q_int(n)
    contents = ZERO
    for i, j in lam.cells():
        contents = contents + Q ** lam.content(i, j)
    return lhs == f_lambda(lam) * contents


@dataclass(frozen=True)
class PhasedValue:
    """coeff * zeta^phase with zeta a primitive (q-1)-th root of unity."""

    coeff: QPoly
    phase: int = 0


def class_sum_value(n: int, s: int, k: int, kind: str, u_phase: int = 0, q: int | None = None) -> PhasedValue:
    """Normalized hook character on z_alpha (semisimple) or z_1 (transvection).

    ``u_phase`` is the exponent of U(alpha); ``q`` (optional) reduces it mod q-1.
    """
    if s < 1 or n % s:
        raise ValueError(f"s = {s} does not divide n = {n}")
    if not 0 <= k <= n // s - 1:
        raise ValueError(f"k = {k} out of range")
    N = q_int(n)
    phase = u_phase % (q - 1) if q else u_phase
    if kind == "semisimple":
        if s == 1:
            return PhasedValue(N * Q ** (n - k - 1), phase)
        return PhasedValue(ZERO, 0)
    if kind == "transvection":
        if s == 1:
            return PhasedValue(N * (Q ** (n - k - 1) - 1), 0)
        return PhasedValue(-N, 0)
    raise ValueError(f"unknown class {kind!r}")


def frobenius_count(n: int, q: int, ell: int, m: int, alphas: list[int] | None = None) -> int:
    """Character-sum count of factorizations of a Singer cycle.

    Sums over s | n, cuspidal U of GL_s and hooks k of
    deg * chi(c^-1) * prod_i normalized value on z_{alpha_i}, divided by |GL_n|.
    Phases of U in C_1 are summed by orthogonality, orbit sums for s >= 2
    exactly in a cyclotomic ring.

    ``alphas`` (integer field representations) is optional; by default any
    sequence with m ones and product det(c) is assumed.
    """
    if q == 2:
        if m != ell:
            raise ValueError("for q = 2 every reflection is a transvection, so m must equal l")
    elif not 0 <= m <= ell - 1:
        raise ValueError("for q > 2 the count needs 0 <= m <= l - 1")
    if n < 1:
        raise ValueError("n must be positive")
    F = field_of_order(q)
    if alphas is not None:
        if len(alphas) != ell or sum(1 for a in alphas if a == 1) != m:
            raise ValueError("alphas must have length l and exactly m ones")
        from .glnq import singer_cycle

        det_c = singer_cycle(n, q).det().value
        prod = 1
        for a in alphas:
            prod = F.mul_int(prod, a)
        # sum_U U(prod alpha / det c) vanishes unless the product matches
        phase_ok = prod == det_c
    else:
        phase_ok = True
    total = 0
    order = gl_order_poly(n).eval(q)
    for s in divisors(n):
        r = n // s
        for k in range(r):
            sign, deg = hook_degree(n, s, k)
            deg_v = sign * deg.eval(q)
            if s == 1:
                # chi(c^-1) = (-1)^k U(det c)^-1; values (ell-m) semisimple, m transvection
                if not phase_ok:
                    continue
                val = q_int(n).eval(q) ** ell * (q ** (n - k - 1) - 1) ** m * q ** ((n - k - 1) * (ell - m))
                total += (q - 1) * deg_v * (-1) ** k * val
            else:
                if m != ell:
                    continue  # a semisimple factor kills every s >= 2 term
                chi_sum = (-1) ** (n - r - k) * cyclotomic_orbit_sum(q, s, q**s - 1)
                total += deg_v * chi_sum * (-q_int(n).eval(q)) ** ell
    if total % order:
        raise AssertionError("character sum not divisible by |GL_n|")
    return total // order


def hook_degree_square_sum(n: int, q: int) -> int:
    return sum(hook_degree(n, 1, k)[1].eval(q) ** 2 for k in range(n))
