"""Matrices over F_q, GL_n(F_q) enumeration and indexing, reflections, Singer cycles.

Matrices act on column vectors and hold integer representations of field
elements. The canonical key of an n x n matrix is

    key = sum_{i,j} entry[i][j] * q**(i*n + j),

so row ``i`` occupies the base-``q**n`` digit ``i`` of the key and the row's
own code is ``sum_j entry[i][j] * q**j``.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .gf import (
    FieldError,
    FieldTable,
    FqElem,
    build_field,
    factorize,
    field_of_order,
    is_irreducible,
    irreducible_polynomials,
    primitive_polynomial,
)

DEFAULT_GROUP_BOUND = 30_000_000
MAX_VECTOR_CODES = 4096


class GLError(ValueError):
    pass


class BoundExceeded(GLError):
    """The requested enumeration is larger than the configured bound."""


class SingularMatrixError(GLError, ZeroDivisionError):
    pass


def gl_order(n: int, q: int) -> int:
    """|GL_n(F_q)| = q^(n(n-1)/2) * prod_{i=1..n} (q^i - 1)."""
    out = q ** (n * (n - 1) // 2)
    for i in range(1, n + 1):
        out *= q**i - 1
    return out


def q_integer(n: int, q: int) -> int:
    """[n]_q = 1 + q + ... + q^(n-1)."""
    return sum(q**i for i in range(n))


def q_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


# ---------------------------------------------------------------------------
# list-based linear algebra over a FieldTable


def _rref(F: FieldTable, rows: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[int]]:
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = F.inv_int(m[r][c])
        m[r] = [F.mul_int(inv, x) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [F.sub_int(x, F.mul_int(f, y)) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(F: FieldTable, rows: Sequence[Sequence[int]]) -> int:
    return len(_rref(F, rows)[1])


def row_space(F: FieldTable, rows: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    """Canonical (reduced row echelon) basis of the span of ``rows``."""
    return tuple(tuple(r) for r in _rref(F, rows)[0])


def kernel(F: FieldTable, rows: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    """Canonical basis of {x : A x = 0}, returned in reduced row echelon form."""
    ncols = len(rows[0])
    red, pivots = _rref(F, rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for r, pc in enumerate(pivots):
            v[pc] = F.neg_int(red[r][fc])
        basis.append(v)
    return row_space(F, basis) if basis else ()


def subspaces(F: FieldTable, n: int, r: int) -> Iterable[tuple[tuple[int, ...], ...]]:
    """All r-dimensional subspaces of F_q^n, each as its RREF basis."""
    q = F.q
    for pivots in itertools.combinations(range(n), r):
        free = [
            (i, j) for i, p in enumerate(pivots) for j in range(p + 1, n) if j not in pivots
        ]
        for vals in itertools.product(range(q), repeat=len(free)):
            m = [[0] * n for _ in range(r)]
            for i, p in enumerate(pivots):
                m[i][p] = 1
            for (i, j), v in zip(free, vals):
                m[i][j] = v
            yield tuple(tuple(row) for row in m)


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class MatrixGF:
    field: FieldTable
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.rows)
        if any(len(r) != n for r in self.rows):
            raise GLError("matrix must be square")
        if any(not 0 <= x < self.field.q for r in self.rows for x in r):
            raise FieldError(f"matrix entry outside F_{self.field.q}")

    # -- constructors ----------------------------------------------------

    @classmethod
    def from_rows(cls, F: FieldTable, rows: Iterable[Iterable[int]]) -> MatrixGF:
        return cls(F, tuple(tuple(int(x) for x in r) for r in rows))

    @classmethod
    def identity(cls, F: FieldTable, n: int) -> MatrixGF:
        return cls(F, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def from_key(cls, F: FieldTable, n: int, key: int) -> MatrixGF:
        key = int(key)
        if not 0 <= key < F.q ** (n * n):
            raise GLError(f"key {key} out of range for {n}x{n} matrices over F_{F.q}")
        digits = []
        for _ in range(n * n):
            digits.append(key % F.q)
            key //= F.q
        return cls(F, tuple(tuple(digits[i * n : (i + 1) * n]) for i in range(n)))

    @classmethod
    def companion(cls, F: FieldTable, poly: Sequence[int]) -> MatrixGF:
        """Companion matrix of a monic polynomial (coefficients low to high).

        Ones on the subdiagonal, last column -c_0..-c_{n-1}; its characteristic
        polynomial is ``poly``.
        """
        poly = list(poly)
        if poly[-1] != 1:
            raise GLError("companion matrix needs a monic polynomial")
        n = len(poly) - 1
        rows = [[0] * n for _ in range(n)]
        for i in range(1, n):
            rows[i][i - 1] = 1
        for i in range(n):
            rows[i][n - 1] = F.neg_int(poly[i])
        return cls.from_rows(F, rows)

    # -- basic data ------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def key(self) -> int:
        q, n = self.field.q, self.n
        return sum(x * q ** (i * n + j) for i, r in enumerate(self.rows) for j, x in enumerate(r))

    def entry(self, i: int, j: int) -> FqElem:
        return self.field.elem(self.rows[i][j])

    def to_array(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.int64).reshape(self.n, self.n)

    def to_json(self) -> dict:
        return {"n": self.n, "q": self.field.q, "rows": [list(r) for r in self.rows]}

    @classmethod
    def from_json(cls, data: dict) -> MatrixGF:
        F = field_of_order(int(data["q"]))
        m = cls.from_rows(F, data["rows"])
        if m.n != int(data["n"]):
            raise GLError("row count does not match n")
        return m

    def __repr__(self) -> str:
        return f"MatrixGF(q={self.field.q}, rows={[list(r) for r in self.rows]})"

    # -- arithmetic ------------------------------------------------------

    def _check(self, other: MatrixGF) -> None:
        if self.field is not other.field:
            raise FieldError("matrices over different fields")
        if self.n != other.n:
            raise GLError(f"dimension mismatch {self.n} vs {other.n}")

    def __mul__(self, other: MatrixGF) -> MatrixGF:
        self._check(other)
        F, n = self.field, self.n
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = 0
                for k in range(n):
                    a, b = self.rows[i][k], other.rows[k][j]
                    if a and b:
                        acc = F.add_int(acc, F.mul_int(a, b))
                row.append(acc)
            out.append(tuple(row))
        return MatrixGF(F, tuple(out))

    def __add__(self, other: MatrixGF) -> MatrixGF:
        self._check(other)
        F = self.field
        return MatrixGF.from_rows(
            F, ([F.add_int(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows))
        )

    def __sub__(self, other: MatrixGF) -> MatrixGF:
        self._check(other)
        F = self.field
        return MatrixGF.from_rows(
            F, ([F.sub_int(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows))
        )

    def transpose(self) -> MatrixGF:
        return MatrixGF(self.field, tuple(zip(*self.rows)))

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        """Matrix times column vector."""
        F = self.field
        out = []
        for r in self.rows:
            acc = 0
            for a, b in zip(r, v):
                if a and b:
                    acc = F.add_int(acc, F.mul_int(a, b))
            out.append(acc)
        return tuple(out)

    def inverse(self) -> MatrixGF:
        F, n = self.field, self.n
        aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(self.rows)]
        red, pivots = _rref(F, aug)
        if pivots[:n] != list(range(n)) or len(red) < n:
            raise SingularMatrixError("matrix is not invertible")
        return MatrixGF.from_rows(F, (r[n:] for r in red))

    def __pow__(self, e: int) -> MatrixGF:
        if e < 0:
            return self.inverse() ** (-e)
        result = MatrixGF.identity(self.field, self.n)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def det(self) -> FqElem:
        F = self.field
        m = [list(r) for r in self.rows]
        n = self.n
        d = 1
        for c in range(n):
            piv = next((i for i in range(c, n) if m[i][c]), None)
            if piv is None:
                return F.zero()
            if piv != c:
                m[c], m[piv] = m[piv], m[c]
                d = F.neg_int(d)
            d = F.mul_int(d, m[c][c])
            inv = F.inv_int(m[c][c])
            for i in range(c + 1, n):
                if m[i][c]:
                    f = F.mul_int(m[i][c], inv)
                    m[i] = [F.sub_int(x, F.mul_int(f, y)) for x, y in zip(m[i], m[c])]
        return F.elem(d)

    def rank(self) -> int:
        return rank(self.field, self.rows)

    def fixed_codim(self) -> int:
        """rank(A - I): codimension of the fixed space."""
        return (self - MatrixGF.identity(self.field, self.n)).rank()

    def fixed_space(self) -> tuple[tuple[int, ...], ...]:
        return kernel(self.field, (self - MatrixGF.identity(self.field, self.n)).rows)

    def charpoly(self) -> list[int]:
        """det(xI - A) as a monic coefficient list (low to high).

        Reduce to upper Hessenberg form by similarity, then expand along the
        subdiagonal; only field operations are used, so it is exact in every
        characteristic.
        """
        F, n = self.field, self.n
        h = [list(r) for r in self.rows]
        for j in range(n - 2):
            piv = next((i for i in range(j + 1, n) if h[i][j]), None)
            if piv is None:
                continue
            if piv != j + 1:
                h[piv], h[j + 1] = h[j + 1], h[piv]
                for r in h:
                    r[piv], r[j + 1] = r[j + 1], r[piv]
            inv = F.inv_int(h[j + 1][j])
            for k in range(j + 2, n):
                if not h[k][j]:
                    continue
                u = F.mul_int(h[k][j], inv)
                h[k] = [F.sub_int(x, F.mul_int(u, y)) for x, y in zip(h[k], h[j + 1])]
                for r in h:
                    r[j + 1] = F.add_int(r[j + 1], F.mul_int(u, r[k]))
        polys: list[list[int]] = [[1]]
        for k in range(n):
            # p_{k+1} = (x - h_kk) p_k - sum_{i<k} h_ik * prod_{m=i+1..k} h_{m,m-1} * p_i
            cur = _poly_mul_linear(F, polys[k], F.neg_int(h[k][k]))
            prod = 1
            for i in range(k - 1, -1, -1):
                prod = F.mul_int(prod, h[i + 1][i])
                if not prod:
                    break
                coef = F.mul_int(h[i][k], prod)
                if coef:
                    cur = _poly_axpy(F, cur, F.neg_int(coef), polys[i])
            polys.append(cur)
        return polys[n]

    def order(self) -> int:
        """Multiplicative order, found by stripping primes from the exponent of GL_n(F_q)."""
        F, n = self.field, self.n
        ident = MatrixGF.identity(F, n)
        if self.det().is_zero():
            raise SingularMatrixError("singular matrix has no order")
        e = 1
        for i in range(1, n + 1):
            e = math.lcm(e, F.q**i - 1)
        pp = 1
        while pp < n:
            pp *= F.p
        e *= pp
        for r in factorize(e):
            while e % r == 0 and self ** (e // r) == ident:
                e //= r
        return e


def _poly_mul_linear(F: FieldTable, p: list[int], c: int) -> list[int]:
    out = [0] * (len(p) + 1)
    for i, a in enumerate(p):
        out[i + 1] = F.add_int(out[i + 1], a)
        out[i] = F.add_int(out[i], F.mul_int(a, c))
    return out


def _poly_axpy(F: FieldTable, y: list[int], a: int, x: list[int]) -> list[int]:
    out = list(y)
    for i, b in enumerate(x):
        out[i] = F.add_int(out[i], F.mul_int(a, b))
    return out


def mat_ops(A: MatrixGF, B: MatrixGF | None, op: str):
    """Dispatch ``mul``, ``inv``, ``det``, ``charpoly`` or ``fixed_codim``."""
    if op == "mul":
        return A * B
    if op == "inv":
        return A.inverse()
    if op == "det":
        return A.det()
    if op == "charpoly":
        return A.charpoly()
    if op == "fixed_codim":
        return A.fixed_codim()
    raise ValueError(f"unknown matrix operation {op!r}")


# ---------------------------------------------------------------------------
# Singer cycles and regular elliptic elements


@functools.lru_cache(maxsize=None)
def _primitive_over(q: int, n: int) -> tuple[int, ...]:
    F = field_of_order(q)
    if F.k == 1:
        big = build_field(F.p, n)
        return tuple(big.prim_poly) + (1,)
    return tuple(primitive_polynomial(F, n))


def singer_cycle(n: int, q: int) -> MatrixGF:
    """Companion matrix of the canonical primitive polynomial of degree n over F_q."""
    if n < 1:
        raise GLError("n must be positive")
    F = field_of_order(q)
    if q**n > 2**20:
        raise FieldError(f"q^n = {q**n} exceeds the field bound")
    return MatrixGF.companion(F, _primitive_over(q, n))


def is_regular_elliptic(g: MatrixGF) -> bool:
    return is_irreducible(g.field, g.charpoly())


def has_stable_subspace(g: MatrixGF) -> bool:
    """True iff some nonzero proper subspace W has gW = W (exhaustive search)."""
    F, n = g.field, g.n
    for r in range(1, n):
        for basis in subspaces(F, n, r):
            images = [g.apply(v) for v in basis]
            if rank(F, list(basis) + images) == r:
                return True
    return False


def irreducible_companions(n: int, q: int) -> list[MatrixGF]:
    F = field_of_order(q)
    return [MatrixGF.companion(F, f) for f in irreducible_polynomials(F, n)]


# ---------------------------------------------------------------------------
# vectorized machinery over vector codes


class VectorSpace:
    """Tables for F_q^n with vectors encoded as codes sum_j v_j q^j."""

    def __init__(self, F: FieldTable, n: int):
        self.field = F
        self.n = n
        self.size = F.q**n
        if self.size > MAX_VECTOR_CODES:
            raise BoundExceeded(f"q^n = {self.size} too large for vector tables")
        codes = np.arange(self.size)
        self.pows = F.q ** np.arange(n, dtype=np.int64)
        self.digits = (codes[:, None] // self.pows[None, :]) % F.q  # (size, n)

    def encode(self, digits: np.ndarray) -> np.ndarray:
        return digits @ self.pows

    @functools.cached_property
    def add(self) -> np.ndarray:
        F = self.field
        d = F.add_table[self.digits[:, None, :], self.digits[None, :, :]]
        return self.encode(d).astype(np.int32)

    @functools.cached_property
    def scale(self) -> np.ndarray:
        F = self.field
        d = F.mul_table[np.arange(F.q)[:, None, None], self.digits[None, :, :]]
        return self.encode(d).astype(np.int32)

    def right_mul_table(self, M: MatrixGF | np.ndarray) -> np.ndarray:
        """code(row) -> code(row . M) for every row vector."""
        F = self.field
        A = M.to_array() if isinstance(M, MatrixGF) else np.asarray(M)
        prods = F.mul_table[self.digits[:, :, None], A[None, :, :]]  # (size, k, j)
        acc = prods[:, 0, :]
        for k in range(1, self.n):
            acc = F.add_table[acc, prods[:, k, :]]
        return self.encode(acc)


class GroupIndex:
    """Sorted enumeration of GL_n(F_q) with key <-> dense index maps."""

    def __init__(self, F: FieldTable, n: int, keys: np.ndarray):
        self.field = F
        self.n = n
        self.q = F.q
        self.keys = keys
        self.space = VectorSpace(F, n)
        self.row_pows = np.array([self.space.size**i for i in range(n)], dtype=np.int64)

    def __len__(self) -> int:
        return len(self.keys)

    @property
    def order(self) -> int:
        return len(self.keys)

    def index(self, key: int) -> int:
        i = int(np.searchsorted(self.keys, key))
        if i >= len(self.keys) or int(self.keys[i]) != int(key):
            raise KeyError(f"{key} is not the key of an element of GL_{self.n}(F_{self.q})")
        return i

    def indices(self, keys: np.ndarray) -> np.ndarray:
        keys = np.asarray(keys, dtype=np.int64)
        idx = np.searchsorted(self.keys, keys)
        idx_c = np.minimum(idx, len(self.keys) - 1)
        if not np.array_equal(self.keys[idx_c], keys):
            raise KeyError("keys outside the group")
        return idx_c

    def key(self, i: int) -> int:
        return int(self.keys[i])

    def matrix(self, i: int) -> MatrixGF:
        return MatrixGF.from_key(self.field, self.n, self.key(i))

    @functools.cached_property
    def identity_index(self) -> int:
        return self.index(MatrixGF.identity(self.field, self.n).key)

    def rowcodes(self, keys: np.ndarray | None = None) -> np.ndarray:
        keys = self.keys if keys is None else np.asarray(keys, dtype=np.int64)
        return (keys[:, None] // self.row_pows[None, :]) % self.space.size

    def matrices(self, keys: np.ndarray | None = None) -> np.ndarray:
        """(N, n, n) uint8 entry array."""
        rc = self.rowcodes(keys)
        return self.space.digits[rc].astype(np.uint8)

    def right_mul_keys(self, M: MatrixGF, keys: np.ndarray | None = None, chunk: int = 1 << 20) -> np.ndarray:
        """Keys of g*M for every g (all of the group unless ``keys`` is given)."""
        keys = self.keys if keys is None else np.asarray(keys, dtype=np.int64)
        table = self.space.right_mul_table(M).astype(np.int64)
        out = np.empty(len(keys), dtype=np.int64)
        for s in range(0, len(keys), chunk):
            rc = self.rowcodes(keys[s : s + chunk])
            out[s : s + chunk] = table[rc] @ self.row_pows
        return out

    def right_mul(self, M: MatrixGF) -> np.ndarray:
        """Index of g*M for every index g."""
        return self.indices(self.right_mul_keys(M))

    def left_mul_keys(self, M: MatrixGF, keys: np.ndarray | None = None) -> np.ndarray:
        """Keys of M*g: row i of M*g is sum_k M[i][k] * row_k(g)."""
        keys = self.keys if keys is None else np.asarray(keys, dtype=np.int64)
        sp = self.space
        rc = self.rowcodes(keys)
        out = np.zeros(len(keys), dtype=np.int64)
        for i in range(self.n):
            acc = np.zeros(len(keys), dtype=np.int64)
            for k in range(self.n):
                c = M.rows[i][k]
                if c:
                    acc = sp.add[acc, sp.scale[c][rc[:, k]]]
            out += acc * self.row_pows[i]
        return out

    def left_mul(self, M: MatrixGF) -> np.ndarray:
        return self.indices(self.left_mul_keys(M))


def index_group(n: int, q: int, bound: int = DEFAULT_GROUP_BOUND) -> GroupIndex:
    """Enumerate GL_n(F_q) row by row; each new row avoids the span of the earlier rows."""
    order = gl_order(n, q)
    if order > bound:
        raise BoundExceeded(f"|GL_{n}(F_{q})| = {order} exceeds bound {bound}")
    if q ** (n * n) >= 2**63:
        raise BoundExceeded("keys do not fit in 64 bits")
    return _index_group(n, q)


@functools.lru_cache(maxsize=4)
def _index_group(n: int, q: int) -> GroupIndex:
    F = field_of_order(q)
    sp = VectorSpace(F, n)
    size = sp.size
    keys = np.zeros(1, dtype=np.int64)
    span = np.zeros((1, size), dtype=bool)
    span[0, 0] = True
    for i in range(n):
        parent, code = np.nonzero(~span)
        keys = keys[parent] + code.astype(np.int64) * size**i
        if i == n - 1:
            break
        old = span[parent]
        new = np.zeros_like(old)
        rows = np.arange(len(parent))[:, None]
        for c in range(F.q):
            # t is in the new span iff t - c*v is in the old one for some c
            neg_w = sp.scale[F.neg_table[c]][code]
            new |= old[rows, sp.add[np.arange(size)[None, :], neg_w[:, None]]]
        span = new
    keys.sort()
    if len(keys) != gl_order(n, q):
        raise AssertionError("enumeration count disagrees with |GL_n(F_q)|")
    return GroupIndex(F, n, keys)


def batch_rank(F: FieldTable, mats: np.ndarray) -> np.ndarray:
    """Ranks of a stack of matrices (vectorized Gauss elimination)."""
    M = np.array(mats, dtype=np.int64)
    N, R, C = M.shape
    rk = np.zeros(N, dtype=np.int64)
    rows = np.arange(R)
    add, mul, neg, inv = F.add_table, F.mul_table, F.neg_table, F.inv_table
    for c in range(C):
        elig = (M[:, :, c] != 0) & (rows[None, :] >= rk[:, None])
        has = elig.any(axis=1)
        sel = np.nonzero(has)[0]
        if len(sel) == 0:
            continue
        pr = np.argmax(elig[sel], axis=1)
        rr = rk[sel]
        prow = M[sel, pr].copy()
        M[sel, pr] = M[sel, rr]
        prow = mul[inv[prow[:, c]][:, None], prow]
        M[sel, rr] = prow
        fac = M[sel, :, c].copy()
        fac[np.arange(len(sel)), rr] = 0
        M[sel] = add[M[sel], neg[mul[fac[:, :, None], prow[:, None, :]]]]
        rk[sel] += 1
    return rk


def batch_fixed_codim(F: FieldTable, mats: np.ndarray) -> np.ndarray:
    mats = np.asarray(mats, dtype=np.int64)
    n = mats.shape[-1]
    eye = np.eye(n, dtype=np.int64)
    diff = F.add_table[mats, F.neg_table[eye]]
    return batch_rank(F, diff)


def batch_codim_between(F: FieldTable, mats: np.ndarray, c: MatrixGF) -> np.ndarray:
    """rank(c - w) = codim of the fixed space of w^{-1} c, for each w in ``mats``."""
    C = c.to_array()
    diff = F.add_table[C[None, :, :], F.neg_table[np.asarray(mats, dtype=np.int64)]]
    return batch_rank(F, diff)


# ---------------------------------------------------------------------------
# reflections


@dataclass(frozen=True)
class ReflectionInfo:
    key: int
    det: FqElem
    kind: str  # "transvection" or "semisimple"
    hyperplane: int  # index of the normalized defining functional
    matrix: MatrixGF

    def to_json(self) -> dict:
        return {
            "key": str(self.key),
            "det": self.det.value,
            "kind": self.kind,
            "hyperplane": self.hyperplane,
        }


def normalized_functionals(F: FieldTable, n: int) -> list[tuple[int, ...]]:
    """Row vectors whose first nonzero entry is 1: one per hyperplane."""
    out = []
    for lead in range(n):
        for tail in itertools.product(range(F.q), repeat=n - lead - 1):
            out.append((0,) * lead + (1,) + tail)
    return out


@functools.lru_cache(maxsize=None)
def _reflections(n: int, q: int) -> tuple[ReflectionInfo, ...]:
    F = field_of_order(q)
    out = []
    vectors = list(itertools.product(range(q), repeat=n))
    for h, phi in enumerate(normalized_functionals(F, n)):
        for v in vectors:
            if not any(v):
                continue
            pv = 0
            for a, b in zip(phi, v):
                pv = F.add_int(pv, F.mul_int(a, b))
            d = F.add_int(1, pv)
            if d == 0:
                continue
            rows = [
                [F.add_int(int(i == j), F.mul_int(v[i], phi[j])) for j in range(n)]
                for i in range(n)
            ]
            m = MatrixGF.from_rows(F, rows)
            kind = "transvection" if d == 1 else "semisimple"
            out.append(ReflectionInfo(m.key, F.elem(d), kind, h, m))
    out.sort(key=lambda r: r.key)
    return tuple(out)


def enumerate_reflections(n: int, q: int, det_filter: FqElem | int | None = None) -> list[ReflectionInfo]:
    """All reflections t = I + v phi of GL_n(F_q), sorted by key.

    ``det_filter`` may be an :class:`FqElem` or an integer representation.
    """
    if n < 1:
        raise GLError("n must be positive")
    refl = _reflections(n, q)
    if det_filter is None:
        return list(refl)
    d = det_filter.value if isinstance(det_filter, FqElem) else int(det_filter)
    if not 0 < d < q:
        raise FieldError(f"{d} is not a nonzero element of F_{q}")
    return [r for r in refl if r.det.value == d]


def reflection_keys(n: int, q: int, det_filter: FqElem | int | None = None) -> np.ndarray:
    return np.array([r.key for r in enumerate_reflections(n, q, det_filter)], dtype=np.int64)


def batch_matmul(F: FieldTable, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Stacked matrix products over F_q (broadcasting over leading axes)."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if F.k == 1:
        return np.matmul(A, B) % F.p
    prods = F.mul_table[A[..., :, :, None], B[..., None, :, :]]  # (..., i, k, j)
    acc = prods[..., :, 0, :]
    for k in range(1, A.shape[-1]):
        acc = F.add_table[acc, prods[..., :, k, :]]
    return acc


def batch_keys(F: FieldTable, mats: np.ndarray) -> np.ndarray:
    mats = np.asarray(mats, dtype=np.int64)
    n = mats.shape[-1]
    pows = F.q ** np.arange(n * n, dtype=np.int64)
    return mats.reshape(mats.shape[:-2] + (n * n,)) @ pows
