"""Absolute order: the interval [e, c] below an element and its fixed-space map.

Absolute length is the codimension of the fixed space, and w <= c exactly
when l(w) + l(w^-1 c) = l(c). Membership is decided by a scan of the whole
group, which is exact and cheap at the sizes where it is feasible.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .glnq import (
    DEFAULT_GROUP_BOUND,
    MatrixGF,
    batch_codim_between,
    batch_fixed_codim,
    index_group,
    kernel,
    q_binomial,
)


class NotInInterval(ValueError):
    pass


def absolute_length(g: MatrixGF) -> int:
    return g.fixed_codim()


@dataclass
class IntervalData:
    target: MatrixGF
    keys: np.ndarray  # sorted member keys
    ranks: np.ndarray  # absolute length of each member
    rank_sizes: list[int] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.keys)

    def __contains__(self, w: MatrixGF) -> bool:
        i = np.searchsorted(self.keys, w.key)
        return i < len(self.keys) and self.keys[i] == w.key

    def rank_of(self, w: MatrixGF) -> int:
        i = int(np.searchsorted(self.keys, w.key))
        if i >= len(self.keys) or self.keys[i] != w.key:
            raise NotInInterval("element is not below the target")
        return int(self.ranks[i])

    def members(self, rank: int | None = None) -> list[MatrixGF]:
        F, n = self.target.field, self.target.n
        sel = self.keys if rank is None else self.keys[self.ranks == rank]
        return [MatrixGF.from_key(F, n, int(k)) for k in sel]


def interval(c: MatrixGF, bound: int = DEFAULT_GROUP_BOUND, chunk: int = 1 << 18) -> IntervalData:
    """All w with l(w) + l(w^-1 c) = l(c), by scanning GL_n(F_q)."""
    F, n = c.field, c.n
    G = index_group(n, F.q, bound)
    top = absolute_length(c)
    keep_keys, keep_ranks = [], []
    for s in range(0, len(G), chunk):
        keys = G.keys[s : s + chunk]
        mats = G.matrices(keys)
        lw = batch_fixed_codim(F, mats)
        lrest = batch_codim_between(F, mats, c)
        ok = lw + lrest == top
        keep_keys.append(keys[ok])
        keep_ranks.append(lw[ok])
    keys = np.concatenate(keep_keys)
    ranks = np.concatenate(keep_ranks)
    sizes = np.bincount(ranks, minlength=top + 1).tolist()
    return IntervalData(c, keys, ranks, sizes)


def kreweras(w: MatrixGF, c: MatrixGF, data: IntervalData | None = None) -> MatrixGF:
    """w -> w^-1 c."""
    if data is not None:
        if w not in data:
            raise NotInInterval("element is not below the target")
    elif absolute_length(w) + absolute_length(w.inverse() * c) != absolute_length(c):
        raise NotInInterval("element is not below the target")
    return w.inverse() * c


def subspace_key(F, basis) -> tuple[int, int]:
    """(dimension, packed RREF entries) identifying a subspace."""
    key = 0
    mult = 1
    for row in basis:
        for x in row:
            key += x * mult
            mult *= F.q
    return len(basis), key


def pi_map_report(c: MatrixGF, data: IntervalData | None = None, list_missed: int = 20) -> dict:
    """Fixed spaces of the members of [e, c] against the subspace lattice."""
    if data is None:
        data = interval(c)
    F, n = c.field, c.n
    fibers: dict[int, Counter] = {k: Counter() for k in range(n + 1)}
    for w, r in zip(data.members(), data.ranks):
        fibers[int(r)][subspace_key(F, w.fixed_space())] += 1
    lattice = [q_binomial(n, k, F.q) for k in range(n + 1)]
    image = [len(fibers[k]) for k in range(n + 1)]
    missed = {}
    if image != lattice:
        from .glnq import subspaces

        for k in range(n + 1):
            if image[k] == lattice[k]:
                continue
            lst = []
            for sub in subspaces(F, n, n - k):
                if subspace_key(F, sub) not in fibers[k]:
                    lst.append([list(r) for r in sub])
                    if len(lst) >= list_missed:
                        break
            missed[str(k)] = lst
    fiber_ms = {
        str(k): {str(size): cnt for size, cnt in sorted(Counter(fibers[k].values()).items())} for k in range(n + 1)
    }
    constant = all(len(v) <= 1 for v in fiber_ms.values())
    return {
        "n": n,
        "q": F.q,
        "rank_sizes": list(data.rank_sizes),
        "lattice_rank_sizes": lattice,
        "pi_image_sizes": image,
        "pi_surjective": image == lattice,
        "fiber_multiset_by_rank": fiber_ms,
        "constant_fibers": constant,
        "missed": missed,
    }


def interval_json(c: MatrixGF, **kw) -> dict:
    rep = pi_map_report(c, **kw)
    keys = ("n", "q", "rank_sizes", "pi_image_sizes", "pi_surjective", "fiber_multiset_by_rank")
    out = {k: rep[k] for k in keys}
    out["lattice_rank_sizes"] = rep["lattice_rank_sizes"]
    return out


def prefix_products(c: MatrixGF) -> set[int]:
    """Keys of all prefixes t_1...t_i of shortest reflection factorizations of c."""
    from .hurwitz import enumerate_factorizations, reflection_system, tuple_products

    F, n = c.field, c.n
    ell = absolute_length(c)
    out = {MatrixGF.identity(F, n).key}
    if ell == 0:
        return out
    tuples = enumerate_factorizations(c, ell, cross_check=False)
    rs = reflection_system(n, F.q)
    del rs
    for i in range(1, ell + 1):
        out.update(int(k) for k in np.unique(tuple_products(c, tuples[:, :i])))
    return out
