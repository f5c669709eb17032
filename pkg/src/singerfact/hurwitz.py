"""Hurwitz braid action on reflection factorizations and orbit decomposition.

Factorizations are stored as integer codes sum_i r_i T^i over the sorted
reflection list (T reflections); the braid generators act through a
precomputed conjugation table ``conj[a, b] = index(t_b^-1 t_a t_b)``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .factor_count import count_factorizations
from .gf import field_of_order
from .glnq import (
    MatrixGF,
    VectorSpace,
    batch_fixed_codim,
    batch_keys,
    batch_matmul,
    enumerate_reflections,
    singer_cycle,
)

DEFAULT_TUPLE_BUDGET = 5_000_000


class EnumerationBudgetExceeded(RuntimeError):
    def __init__(self, message: str, *, depth: int, size: int, budget: int):
        super().__init__(message)
        self.depth = depth
        self.size = size
        self.budget = budget


class InvariantViolation(AssertionError):
    pass


class ReflectionSystem:
    """Sorted reflections of GL_n(F_q) with conjugation and multiplication tables."""

    def __init__(self, n: int, q: int):
        self.n, self.q = n, q
        self.field = field_of_order(q)
        self.refl = enumerate_reflections(n, q)
        self.T = len(self.refl)
        self.keys = np.array([r.key for r in self.refl], dtype=np.int64)
        self.dets = np.array([r.det.value for r in self.refl], dtype=np.int64)
        self.mats = np.stack([r.matrix.to_array() for r in self.refl])
        self.inv_mats = np.stack([r.matrix.inverse().to_array() for r in self.refl])

    def index_of_keys(self, keys: np.ndarray) -> np.ndarray:
        """Reflection index for each key, -1 where the key is not a reflection."""
        idx = np.searchsorted(self.keys, keys)
        idx_c = np.minimum(idx, self.T - 1)
        return np.where(self.keys[idx_c] == keys, idx_c, -1)

    @property
    def conj(self) -> np.ndarray:
        if not hasattr(self, "_conj"):
            self._conj = self._build_conj()
        return self._conj

    def _build_conj(self) -> np.ndarray:
        F = self.field
        T = self.T
        # t_b^-1 t_a t_b for all (a, b)
        left = batch_matmul(F, self.inv_mats[None, :, :, :], self.mats[:, None, :, :])  # [a, b] = t_b^-1 t_a
        full = batch_matmul(F, left, self.mats[None, :, :, :])
        idx = self.index_of_keys(batch_keys(F, full))
        if (idx < 0).any():
            raise InvariantViolation("a conjugate of a reflection is not a reflection")
        # check t_b * conj == t_a * t_b once
        lhs = batch_keys(F, batch_matmul(F, self.mats[None, :, :, :], self.mats[idx]))
        rhs = batch_keys(F, batch_matmul(F, self.mats[:, None, :, :], self.mats[None, :, :, :]))
        if not np.array_equal(lhs, rhs):
            raise InvariantViolation("conjugation table inconsistent")
        if not np.array_equal(self.dets[idx], np.broadcast_to(self.dets[:, None], (T, T))):
            raise InvariantViolation("conjugation changed a determinant")
        return idx.astype(np.int64)

    @property
    def inv_conj(self) -> np.ndarray:
        """inv_conj[x, y] = index(x y x^-1)."""
        if not hasattr(self, "_inv_conj"):
            T = self.T
            out = np.full((T, T), -1, dtype=np.int64)
            a = np.repeat(np.arange(T), T)
            b = np.tile(np.arange(T), T)
            # conj[a, b] = b^-1 a b, so b conj[a, b] b^-1 = a
            out[b, self.conj[a, b]] = a
            self._inv_conj = out
        return self._inv_conj


@lru_cache(maxsize=8)
def reflection_system(n: int, q: int) -> ReflectionSystem:
    return ReflectionSystem(n, q)


# ---------------------------------------------------------------------------
# tuple-level API


@dataclass(frozen=True)
class FactTuple:
    keys: tuple[int, ...]
    product: int
    dets: tuple[int, ...]  # sorted determinant values

    @classmethod
    def from_matrices(cls, mats: list[MatrixGF]) -> FactTuple:
        if not mats:
            raise ValueError("empty factorization")
        if any(m.fixed_codim() != 1 for m in mats):
            raise ValueError("every factor must be a reflection")
        p = mats[0]
        for m in mats[1:]:
            p = p * m
        return cls(tuple(m.key for m in mats), p.key, tuple(sorted(m.det().value for m in mats)))

    def matrices(self, F, n: int) -> list[MatrixGF]:
        return [MatrixGF.from_key(F, n, k) for k in self.keys]


def apply_braid(t: FactTuple, i: int, inverse: bool = False, *, field=None, n: int | None = None) -> FactTuple:
    """sigma_i (1-based) on positions i, i+1: (a, b) -> (b, b^-1 a b); inverse: (x, y) -> (x y x^-1, x)."""
    ell = len(t.keys)
    if not 1 <= i <= ell - 1:
        raise IndexError(f"strand index {i} outside 1..{ell - 1}")
    if field is None or n is None:
        raise ValueError("field and n are required")
    mats = t.matrices(field, n)
    a, b = mats[i - 1], mats[i]
    if inverse:
        new = (a * b * a.inverse(), a)
    else:
        new = (b, b.inverse() * a * b)
    mats[i - 1], mats[i] = new
    out = FactTuple.from_matrices(mats)
    if out.product != t.product or out.dets != t.dets:
        raise InvariantViolation("braid move changed the product or determinant multiset")
    return out


# ---------------------------------------------------------------------------
# enumeration


def enumerate_factorizations(
    target: MatrixGF, ell: int, budget: int = DEFAULT_TUPLE_BUDGET, cross_check: bool = True
) -> np.ndarray:
    """All reflection factorizations of ``target`` of length ``ell``.

    Returns an (N, ell) array of reflection indices (into the sorted reflection
    list), rows sorted lexicographically. Tuples are grown from the right;
    a suffix is kept only while the remaining left part c t_l^-1 ... has
    fixed-space codimension at most the number of factors still to place.
    """
    F, n = target.field, target.n
    if ell < 1:
        raise ValueError("length must be positive")
    rs = reflection_system(n, F.q)
    sp = VectorSpace(F, n)
    row_pows = np.array([sp.size**i for i in range(n)], dtype=np.int64)
    tabs = np.stack([sp.right_mul_table(m) for m in rs.inv_mats]).astype(np.int64)  # right mult by t^-1
    suffix = np.zeros((1, 0), dtype=np.int64)
    rest = np.array([target.key], dtype=np.int64)
    chunk = max(1, 2_000_000 // rs.T)
    for depth in range(ell - 1):
        remaining = ell - depth - 1  # factors still to place after this peel
        new_suf, new_rest = [], []
        total = 0
        for s in range(0, len(rest), chunk):
            rk = rest[s : s + chunk]
            rc = (rk[:, None] // row_pows[None, :]) % sp.size
            cand = np.zeros((len(rk), rs.T), dtype=np.int64)
            for i in range(n):
                cand += tabs[:, rc[:, i]].T * row_pows[i]
            flat = cand.reshape(-1)
            # residuals repeat a lot; rank each distinct one once
            uniq, inv = np.unique(flat, return_inverse=True)
            codim = batch_fixed_codim(F, sp.digits[(uniq[:, None] // row_pows[None, :]) % sp.size])[inv]
            keep = np.nonzero(codim <= remaining)[0]
            parent = keep // rs.T + s
            t_idx = keep % rs.T
            new_suf.append(np.column_stack([t_idx, suffix[parent]]))
            new_rest.append(flat[keep])
            total += len(keep)
            if total > budget:
                raise EnumerationBudgetExceeded(
                    f"more than {budget} partial factorizations at depth {depth + 1}",
                    depth=depth + 1,
                    size=total,
                    budget=budget,
                )
        suffix = np.concatenate(new_suf) if new_suf else np.zeros((0, depth + 1), dtype=np.int64)
        rest = np.concatenate(new_rest) if new_rest else np.zeros(0, dtype=np.int64)
    # the remaining left part must itself be a reflection
    first = rs.index_of_keys(rest)
    ok = first >= 0
    out = np.column_stack([first[ok], suffix[ok]])
    if len(out) > budget:
        raise EnumerationBudgetExceeded("too many factorizations", depth=ell, size=len(out), budget=budget)
    out = out[np.lexsort(out.T[::-1])]
    if cross_check:
        expected = count_factorizations(target, ell)
        if expected != len(out):
            raise InvariantViolation(f"enumerated {len(out)} factorizations, count says {expected}")
    return out


def tuple_products(target: MatrixGF, tuples: np.ndarray) -> np.ndarray:
    """Keys of t_1 ... t_l for each row (vectorized check)."""
    F, n = target.field, target.n
    rs = reflection_system(n, F.q)
    acc = rs.mats[tuples[:, 0]]
    for j in range(1, tuples.shape[1]):
        acc = batch_matmul(F, acc, rs.mats[tuples[:, j]])
    return batch_keys(F, acc)


# ---------------------------------------------------------------------------
# orbits


def _encode(tuples: np.ndarray, T: int) -> np.ndarray:
    pows = T ** np.arange(tuples.shape[1], dtype=np.int64)
    return tuples @ pows


def _det_code(rs: ReflectionSystem, tuples: np.ndarray) -> np.ndarray:
    d = np.sort(rs.dets[tuples], axis=1)
    pows = rs.q ** np.arange(tuples.shape[1], dtype=np.int64)
    return d @ pows


def braid_images(rs: ReflectionSystem, tuples: np.ndarray, i: int, inverse: bool) -> np.ndarray:
    """sigma_i or its inverse (0-based i) applied to every row."""
    out = tuples.copy()
    a, b = tuples[:, i], tuples[:, i + 1]
    if inverse:
        out[:, i] = rs.inv_conj[a, b]  # a b a^-1
        out[:, i + 1] = a
    else:
        out[:, i] = b
        out[:, i + 1] = rs.conj[a, b]
    return out


@dataclass
class OrbitDecomposition:
    sizes: list[int]
    representatives: list[tuple[int, ...]]  # reflection indices
    det_multisets: list[tuple[int, ...]]
    labels: np.ndarray  # orbit id per input row


def orbit_decompose(target: MatrixGF, tuples: np.ndarray) -> OrbitDecomposition:
    """Breadth-first closure under sigma_1..sigma_{l-1} and their inverses."""
    F, n = target.field, target.n
    rs = reflection_system(n, F.q)
    N, ell = tuples.shape
    if N == 0:
        return OrbitDecomposition([], [], [], np.zeros(0, dtype=np.int64))
    if not np.all(tuple_products(target, tuples) == target.key):
        raise ValueError("tuples do not all multiply to the target")
    codes = _encode(tuples, rs.T)
    order = np.argsort(codes)
    sorted_codes = codes[order]
    dcode = _det_code(rs, tuples)
    labels = np.full(N, -1, dtype=np.int64)
    sizes, reps, dms = [], [], []
    for start in range(N):
        if labels[start] >= 0:
            continue
        oid = len(sizes)
        labels[start] = oid
        frontier = np.array([start])
        size = 1
        while len(frontier):
            nxt = []
            for i in range(ell - 1):
                for inv in (False, True):
                    img = braid_images(rs, tuples[frontier], i, inv)
                    pos = np.searchsorted(sorted_codes, _encode(img, rs.T))
                    pos = np.minimum(pos, N - 1)
                    idx = order[pos]
                    if not np.array_equal(codes[idx], _encode(img, rs.T)):
                        raise InvariantViolation("braid image left the factorization set")
                    if not np.array_equal(dcode[idx], dcode[frontier]):
                        raise InvariantViolation("braid move changed the determinant multiset")
                    new = idx[labels[idx] < 0]
                    new = np.unique(new)
                    labels[new] = oid
                    size += len(new)
                    nxt.append(new)
            frontier = np.unique(np.concatenate(nxt)) if nxt else np.zeros(0, dtype=np.int64)
        sizes.append(size)
        reps.append(tuple(int(x) for x in tuples[start]))
        dms.append(tuple(sorted(int(rs.dets[x]) for x in tuples[start])))
    return OrbitDecomposition(sizes, reps, dms, labels)


def orbit_report(target: MatrixGF, ell: int, **kw) -> dict:
    """Orbits grouped by determinant multiset."""
    tuples = enumerate_factorizations(target, ell, **kw)
    dec = orbit_decompose(target, tuples)
    classes: dict = {}
    rs = reflection_system(target.n, target.field.q)
    for oid, (size, dm) in enumerate(zip(dec.sizes, dec.det_multisets)):
        c = classes.setdefault(dm, {"det_multiset": list(dm), "tuple_count": 0, "orbit_sizes": []})
        c["tuple_count"] += size
        c["orbit_sizes"].append(size)
    for c in classes.values():
        c["orbit_sizes"].sort()
    del rs
    return {
        "target_charpoly": target.charpoly(),
        "ell": ell,
        "tuple_count": int(len(tuples)),
        "classes": [classes[k] for k in sorted(classes)],
    }


def singer_orbit_check(n: int, q: int, ell: int, **kw) -> dict:
    """Singer-cycle factorizations with equal det multisets form one Hurwitz orbit?"""
    rep = orbit_report(singer_cycle(n, q), ell, **kw)
    rep.update({"n": n, "q": q, "pass": all(len(c["orbit_sizes"]) == 1 for c in rep["classes"])})
    return rep


def jordan_block(n: int, q: int) -> MatrixGF:
    """Unipotent single Jordan block: ones on the diagonal and superdiagonal."""
    F = field_of_order(q)
    return MatrixGF.from_rows(F, [[int(j == i or j == i + 1) for j in range(n)] for i in range(n)])


def orbit_sizes_multiset(dec: OrbitDecomposition) -> dict[int, int]:
    return dict(sorted(Counter(dec.sizes).items()))
