"""Exact counts of ordered reflection factorizations by group-algebra convolution.

Two engines share one contract:

* **dense**: a coefficient array over an indexed copy of GL_n(F_q);
  ``v'[g t] += v[g]`` becomes ``v' = sum_t v[pull_t]`` with
  ``pull_t[h] = index(h t^{-1})``;
* **sparse**: sorted key/count arrays. The backward half tracks residuals
  ``R = c t_l^{-1} ... t_s^{-1}``, which must satisfy
  ``codim(R) <= s - 1``; anything else is pruned.

Both can split the word in the middle and take an inner product. The result
is bit-identical to the direct left-to-right convolution.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .gf import FieldTable, FqElem, field_of_order
from .glnq import (
    BoundExceeded,
    GroupIndex,
    MatrixGF,
    VectorSpace,
    batch_fixed_codim,
    enumerate_reflections,
    index_group,
    irreducible_companions,
    singer_cycle,
)

DENSE_ORDER_LIMIT = 2_000_000
PULL_TABLE_LIMIT = 40_000_000
DEFAULT_SPARSE_CAP = 60_000_000
_INT64_SAFE = 2**62


class BudgetExceeded(RuntimeError):
    """A sparse vector outgrew the configured cap."""

    def __init__(self, message: str, *, step: int, support: int, cap: int):
        super().__init__(message)
        self.step = step
        self.support = support
        self.cap = cap

    def progress(self) -> dict:
        return {"step": self.step, "support": self.support, "cap": self.cap}


class DegenerateCaseError(ValueError):
    """GL_1(F_2) is trivial; its 'Singer cycle' is the identity and has no reflections."""


class FixedDetCount(int):
    """An int carrying ``obstructed``: True when prod(alphas) != det(target)."""

    obstructed: bool

    def __new__(cls, value: int, obstructed: bool = False):
        obj = super().__new__(cls, value)
        obj.obstructed = obstructed
        return obj


# ---------------------------------------------------------------------------
# plans


@dataclass(frozen=True)
class StepPlan:
    ell: int
    filters: tuple[int | None, ...]  # per step: None for all reflections, else a det value

    def __post_init__(self):
        if self.ell < 0:
            raise ValueError("number of factors must be nonnegative")
        if len(self.filters) != self.ell:
            raise ValueError("one filter per step is required")

    @classmethod
    def all_reflections(cls, ell: int) -> StepPlan:
        return cls(ell, (None,) * ell)

    @classmethod
    def from_alphas(cls, alphas: Sequence[FqElem | int]) -> StepPlan:
        vals = tuple(a.value if isinstance(a, FqElem) else int(a) for a in alphas)
        if any(v == 0 for v in vals):
            raise ValueError("determinants must be nonzero")
        return cls(len(vals), vals)

    def validate(self, q: int) -> None:
        for f in self.filters:
            if f is not None and not 0 < f < q:
                raise ValueError(f"{f} is not a nonzero element of F_{q}")

    def describe(self) -> str:
        if all(f is None for f in self.filters):
            return "ALL"
        return "dets:" + ",".join("*" if f is None else str(f) for f in self.filters)


def _check_degenerate(n: int, q: int) -> None:
    if n == 1 and q == 2:
        raise DegenerateCaseError(
            "GL_1(F_2) is trivial: its Singer cycle is the identity and it has no reflections"
        )


def _class_matrices(n: int, q: int, flt: int | None) -> list[MatrixGF]:
    return [r.matrix for r in enumerate_reflections(n, q, flt)]


def _mass_bound(n: int, q: int, filters: Iterable[int | None]) -> int:
    m = 1
    for f in filters:
        m *= len(enumerate_reflections(n, q, f))
    return m


def _zeros(N: int, big: bool) -> np.ndarray:
    if big:
        out = np.empty(N, dtype=object)
        out[:] = 0
        return out
    return np.zeros(N, dtype=np.int64)


# ---------------------------------------------------------------------------
# dense engine


class DenseEngine:
    """Convolution over an enumerated group; tables are cached per step class."""

    def __init__(self, G: GroupIndex):
        self.G = G
        self._pull: dict = {}
        self._push: dict = {}

    def _tables(self, flt: int | None, inverse: bool) -> list[np.ndarray] | None:
        cache = self._pull if inverse else self._push
        if flt in cache:
            return cache[flt]
        mats = _class_matrices(self.G.n, self.G.q, flt)
        if len(mats) * len(self.G) > PULL_TABLE_LIMIT:
            return None
        tabs = [self.G.right_mul(m.inverse() if inverse else m).astype(np.int32) for m in mats]
        cache[flt] = tabs
        return tabs

    def _apply(self, v: np.ndarray, flt: int | None, inverse: bool) -> np.ndarray:
        out = np.zeros_like(v)
        tabs = self._tables(flt, inverse)
        if tabs is None:
            tabs = (
                self.G.right_mul(m.inverse() if inverse else m)
                for m in _class_matrices(self.G.n, self.G.q, flt)
            )
        for t in tabs:
            out += v[t]
        return out

    def forward(self, filters: Sequence[int | None], big: bool) -> np.ndarray:
        """v[g] = number of words t_1..t_k in the step classes with product g."""
        v = _zeros(len(self.G), big)
        v[self.G.identity_index] = 1
        for f in filters:
            v = self._apply(v, f, inverse=True)
        return v

    def backward(self, target_index: int, filters: Sequence[int | None], big: bool) -> np.ndarray:
        """w[g] = number of words t_1..t_k in the step classes with g t_1..t_k = target."""
        w = _zeros(len(self.G), big)
        w[target_index] = 1
        for f in reversed(filters):
            w = self._apply(w, f, inverse=False)
        return w


# ---------------------------------------------------------------------------
# sparse engine


def _aggregate(keys: np.ndarray, counts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if len(keys) == 0:
        return keys, counts
    order = np.argsort(keys, kind="stable")
    k = keys[order]
    uniq, start = np.unique(k, return_index=True)
    return uniq, np.add.reduceat(counts[order], start)


class SparseEngine:
    """Key/count arrays; right multiplication by row-code tables."""

    def __init__(self, F: FieldTable, n: int, cap: int = DEFAULT_SPARSE_CAP, chunk: int = 1 << 16):
        if F.q ** (n * n) >= 2**63:
            raise BoundExceeded("keys do not fit in 64 bits")
        self.field = F
        self.n = n
        self.space = VectorSpace(F, n)
        self.row_pows = np.array([self.space.size**i for i in range(n)], dtype=np.int64)
        self.cap = cap
        self.chunk = chunk

    def _tables(self, flt: int | None, inverse: bool) -> np.ndarray:
        mats = _class_matrices(self.n, self.field.q, flt)
        return np.stack(
            [self.space.right_mul_table(m.inverse() if inverse else m) for m in mats]
        ).astype(np.int64)

    def _rowcodes(self, keys: np.ndarray) -> np.ndarray:
        return (keys[:, None] // self.row_pows[None, :]) % self.space.size

    def _products(self, keys: np.ndarray, tables: np.ndarray) -> np.ndarray:
        """(len(keys), T) keys of g * t for every state g and table t."""
        rc = self._rowcodes(keys)
        out = np.zeros((len(keys), tables.shape[0]), dtype=np.int64)
        for i in range(self.n):
            out += tables[:, rc[:, i]].T * self.row_pows[i]
        return out

    def _codim(self, keys: np.ndarray) -> np.ndarray:
        mats = self.space.digits[self._rowcodes(keys)]
        return batch_fixed_codim(self.field, mats)

    def _step(self, keys, counts, tables, step, max_codim=None):
        new_k, new_c = [], []
        total = 0
        for s in range(0, len(keys), self.chunk):
            prod = self._products(keys[s : s + self.chunk], tables)
            c = np.repeat(counts[s : s + self.chunk], tables.shape[0])
            k = prod.reshape(-1)
            if max_codim is not None:
                keep = self._codim(k) <= max_codim
                k, c = k[keep], c[keep]
            k, c = _aggregate(k, c)
            new_k.append(k)
            new_c.append(c)
            total += len(k)
            if total > self.cap:
                raise BudgetExceeded(
                    f"sparse support exceeded cap {self.cap} at step {step}",
                    step=step,
                    support=total,
                    cap=self.cap,
                )
        if not new_k:
            return keys[:0], counts[:0]
        return _aggregate(np.concatenate(new_k), np.concatenate(new_c))

    def forward(self, filters, big):
        keys = np.array([MatrixGF.identity(self.field, self.n).key], dtype=np.int64)
        counts = _zeros(1, big)
        counts[0] = 1
        for i, f in enumerate(filters):
            keys, counts = self._step(keys, counts, self._tables(f, False), i + 1)
        return keys, counts

    def backward(self, target: MatrixGF, filters, big, front=0, meet_keys=None, meet_counts=None):
        """Peel steps from the right of ``target``; ``front`` steps remain before them.

        With ``meet_keys`` the final peel is joined against that sorted
        distribution and the inner product is returned.
        """
        keys = np.array([target.key], dtype=np.int64)
        counts = _zeros(1, big)
        counts[0] = 1
        ell_back = len(filters)
        lead = len(filters) if meet_keys is None else len(filters) - 1
        for j in range(lead):
            f = filters[ell_back - 1 - j]
            # what is left must be a product of this many reflections
            remaining = front + ell_back - 1 - j
            keys, counts = self._step(
                keys, counts, self._tables(f, True), j + 1, max_codim=remaining
            )
        if meet_keys is None:
            return keys, counts
        f = filters[0]
        tables = self._tables(f, True)
        acc = 0
        for s in range(0, len(keys), self.chunk):
            prod = self._products(keys[s : s + self.chunk], tables)
            c = counts[s : s + self.chunk]
            idx = np.searchsorted(meet_keys, prod)
            idx_c = np.minimum(idx, len(meet_keys) - 1)
            hit = meet_keys[idx_c] == prod
            rows, cols = np.nonzero(hit)
            contrib = c[rows] * meet_counts[idx_c[rows, cols]]
            if len(contrib):
                acc += int(contrib.sum())
        return acc


# ---------------------------------------------------------------------------
# public counting API


def _choose_mode(n: int, q: int, mode: str) -> str:
    from .glnq import gl_order

    if mode != "auto":
        return mode
    return "dense" if gl_order(n, q) <= DENSE_ORDER_LIMIT else "sparse"


_DENSE_CACHE: dict = {}


def _dense_engine(n: int, q: int) -> DenseEngine:
    key = (n, q)
    if key not in _DENSE_CACHE:
        _DENSE_CACHE.clear()
        _DENSE_CACHE[key] = DenseEngine(index_group(n, q))
    return _DENSE_CACHE[key]


def count_factorizations(
    target: MatrixGF,
    plan: StepPlan | int,
    *,
    mode: str = "auto",
    mitm: bool = False,
    cap: int = DEFAULT_SPARSE_CAP,
) -> int:
    """Number of tuples (t_1..t_l), t_i in the step-i class, with t_1...t_l = target.

    ``mode`` is ``"dense"``, ``"sparse"`` or ``"auto"``; ``mitm`` splits the
    word in half and takes an inner product. The sparse engine always meets
    in the middle.
    """
    if isinstance(plan, int):
        plan = StepPlan.all_reflections(plan)
    F, n = target.field, target.n
    q = F.q
    _check_degenerate(n, q)
    plan.validate(q)
    if target.det().is_zero():
        raise ValueError("target must be invertible")
    ell = plan.ell
    if ell == 0:
        return int(target == MatrixGF.identity(F, n))
    big = _mass_bound(n, q, plan.filters) >= _INT64_SAFE
    mode = _choose_mode(n, q, mode)
    if mode == "dense":
        eng = _dense_engine(n, q)
        c_idx = eng.G.index(target.key)
        if not mitm:
            v = eng.forward(plan.filters, big)
            return int(v[c_idx])
        k = ell // 2
        f = eng.forward(plan.filters[:k], big)
        w = eng.backward(c_idx, plan.filters[k:], big)
        if not big:
            f, w = f.astype(object), w.astype(object)
        return int(np.dot(f, w))
    if mode != "sparse":
        raise ValueError(f"unknown mode {mode!r}")
    eng = SparseEngine(F, n, cap=cap)
    # products of k reflections are cheap to aggregate; the back half is pruned
    k = ell // 2
    fk, fc = eng.forward(plan.filters[:k], big)
    return int(eng.backward(target, plan.filters[k:], big, front=k, meet_keys=fk, meet_counts=fc))


def count_fixed_dets(target: MatrixGF, alphas: Sequence[FqElem | int], **kw) -> FixedDetCount:
    """Count factorizations with det(t_i) = alphas[i]; obstructed sequences give 0."""
    F = target.field
    plan = StepPlan.from_alphas(alphas)
    prod = 1
    for a in plan.filters:
        prod = F.mul_int(prod, a)
    if prod != target.det().value:
        return FixedDetCount(0, obstructed=True)
    return FixedDetCount(count_factorizations(target, plan, **kw))


def det_sequences(q: int, ell: int) -> Iterable[tuple[int, ...]]:
    return itertools.product(range(1, q), repeat=ell)


def survey_regular_elliptic(n: int, q: int, ell: int, **kw) -> dict[tuple[int, ...], int]:
    """Count for the companion matrix of every irreducible monic degree-n polynomial."""
    return {
        tuple(c.charpoly()): count_factorizations(c, ell, **kw) for c in irreducible_companions(n, q)
    }


def count_singer(n: int, q: int, ell: int, **kw) -> int:
    return count_factorizations(singer_cycle(n, q), ell, **kw)


def count_json(target: MatrixGF, plan: StepPlan, count: int) -> dict:
    return {
        "n": target.n,
        "q": target.field.q,
        "ell": plan.ell,
        "target_charpoly": target.charpoly(),
        "filter": plan.describe(),
        "count": str(count),
    }


# ---------------------------------------------------------------------------
# group algebra and Jucys-Murphy elements


@dataclass(frozen=True)
class GroupAlgebraVector:
    field: FieldTable
    n: int
    coeffs: dict = field(default_factory=dict)  # key -> nonzero int

    @classmethod
    def from_elements(cls, F: FieldTable, n: int, elems: Iterable[MatrixGF]) -> GroupAlgebraVector:
        c: dict = {}
        for m in elems:
            c[m.key] = c.get(m.key, 0) + 1
        return cls(F, n, {k: v for k, v in c.items() if v})

    def _combine(self, other: GroupAlgebraVector, sign: int) -> GroupAlgebraVector:
        c = dict(self.coeffs)
        for k, v in other.coeffs.items():
            c[k] = c.get(k, 0) + sign * v
        return GroupAlgebraVector(self.field, self.n, {k: v for k, v in c.items() if v})

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __mul__(self, other: GroupAlgebraVector) -> GroupAlgebraVector:
        F, n = self.field, self.n
        mats_a = {k: MatrixGF.from_key(F, n, k) for k in self.coeffs}
        mats_b = {k: MatrixGF.from_key(F, n, k) for k in other.coeffs}
        c: dict = {}
        for ka, va in self.coeffs.items():
            for kb, vb in other.coeffs.items():
                k = (mats_a[ka] * mats_b[kb]).key
                c[k] = c.get(k, 0) + va * vb
        return GroupAlgebraVector(F, n, {k: v for k, v in c.items() if v})

    def conjugate(self, h: MatrixGF) -> GroupAlgebraVector:
        hi = h.inverse()
        c: dict = {}
        for k, v in self.coeffs.items():
            kk = (h * MatrixGF.from_key(self.field, self.n, k) * hi).key
            c[kk] = c.get(kk, 0) + v
        return GroupAlgebraVector(self.field, self.n, c)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __len__(self) -> int:
        return len(self.coeffs)


def commutator(a: GroupAlgebraVector, b: GroupAlgebraVector) -> GroupAlgebraVector:
    return a * b - b * a


def _block_embed(m: MatrixGF, n: int) -> MatrixGF:
    F, k = m.field, m.n
    rows = [list(r) + [0] * (n - k) for r in m.rows]
    rows += [[int(i == j) for j in range(n)] for i in range(k, n)]
    return MatrixGF.from_rows(F, rows)


def _in_smaller_block(m: MatrixGF, k: int) -> bool:
    """True iff m = diag(A, 1) with A in GL_k (k = m.n - 1)."""
    n = m.n
    return m.rows[n - 1] == tuple(int(j == n - 1) for j in range(n)) and all(
        m.rows[i][n - 1] == 0 for i in range(n - 1)
    )


def jm_element(n: int, q: int, m: int, alpha: int) -> GroupAlgebraVector:
    """J_m^alpha: sum of det-alpha reflections of GL_m not lying in GL_{m-1}, inside GL_n."""
    F = field_of_order(q)
    if not 1 <= m <= n:
        raise ValueError("need 1 <= m <= n")
    elems = []
    for r in enumerate_reflections(m, q, alpha):
        if m > 1 and _in_smaller_block(r.matrix, m - 1):
            continue
        elems.append(_block_embed(r.matrix, n))
    return GroupAlgebraVector.from_elements(F, n, elems)


def _generators(F: FieldTable, n: int) -> list[MatrixGF]:
    gens = []
    for i in range(n):
        for j in range(n):
            if i != j:
                rows = [[int(a == b) for b in range(n)] for a in range(n)]
                rows[i][j] = 1
                gens.append(MatrixGF.from_rows(F, rows))
    rows = [[int(a == b) for b in range(n)] for a in range(n)]
    rows[0][0] = F.gen().value
    gens.append(MatrixGF.from_rows(F, rows))
    return gens


def jm_commutation(n: int, q: int, full_conjugation: bool = True, bound: int = 200_000) -> dict:
    """Check that all J_m^alpha commute and that z_alpha = sum_m J_m^alpha is central."""
    from .glnq import gl_order

    if gl_order(n, q) > bound:
        raise BoundExceeded(f"|GL_{n}(F_{q})| exceeds {bound}")
    F = field_of_order(q)
    J = {(m, a): jm_element(n, q, m, a) for m in range(1, n + 1) for a in range(1, q)}
    pairs = []
    for (x, y) in itertools.combinations_with_replacement(sorted(J), 2):
        comm = commutator(J[x], J[y])
        pairs.append({"a": list(x), "b": list(y), "commute": comm.is_zero()})
    central = []
    gens = _generators(F, n)
    hs = [index_group(n, q).matrix(i) for i in range(gl_order(n, q))] if full_conjugation else gens
    for a in range(1, q):
        z = GroupAlgebraVector(F, n, {})
        for m in range(1, n + 1):
            z = z + J[(m, a)]
        expected = GroupAlgebraVector.from_elements(
            F, n, (r.matrix for r in enumerate_reflections(n, q, a))
        )
        gens_ok = all(commutator(z, GroupAlgebraVector.from_elements(F, n, [g])).is_zero() for g in gens)
        conj_ok = all(z.conjugate(h) == z for h in hs)
        central.append(
            {"alpha": a, "equals_class_sum": z == expected, "commutes_with_generators": gens_ok, "conjugation_invariant": conj_ok}
        )
    ok = all(p["commute"] for p in pairs) and all(
        c["equals_class_sum"] and c["commutes_with_generators"] and c["conjugation_invariant"] for c in central
    )
    return {
        "n": n,
        "q": q,
        "elements": {f"J_{m}^{a}": len(v) for (m, a), v in sorted(J.items())},
        "pairs": pairs,
        "central": central,
        "pass": ok,
    }
