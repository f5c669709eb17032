"""The acceptance suite: one function per criterion, shared by the CLI and the tests.

Each criterion returns ``{"id", "name", "pass", "details", "seconds"}``.
"""

from __future__ import annotations

import itertools
import time
from collections import Counter

from .absorder import interval, pi_map_report
from .charvals import F_ROUTES, content_identity, f_lambda, frobenius_count, partitions
from .factor_count import count_factorizations, count_fixed_dets, jm_commutation
from .gf import build_field, field_of_order
from .glnq import MatrixGF, q_binomial, singer_cycle
from .hurwitz import singer_orbit_check, enumerate_factorizations, jordan_block, orbit_decompose
from .qformula import (
    aggregate_identity,
    classical_t,
    cyclotomic_orbit_sum,
    egf_check,
    ogf_check,
    q1_closed,
    q1_limit,
    tq,
    tq_nlm,
    tq_q2_character_form,
)

SINGER_GRID = [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (4, 2)]
HURWITZ_LIST = [(2, 2, 2), (3, 2, 3), (4, 2, 4), (3, 2, 4), (2, 3, 2), (2, 3, 3), (2, 3, 4), (3, 3, 3), (2, 5, 2), (2, 5, 3)]
HURWITZ_HEAVY = [(5, 2, 5)]


def valid_det_sequence(q: int, ell: int, m: int, det_c: int) -> tuple[int, ...] | None:
    """m ones followed by l-m non-identity determinants multiplying to det_c, if any."""
    F = field_of_order(q)
    for rest in itertools.product(range(2, q), repeat=ell - m):
        prod = 1
        for a in rest:
            prod = F.mul_int(prod, a)
        if prod == det_c:
            return (1,) * m + rest
    return None


def _timed(cid: int, name: str, fn) -> dict:
    t0 = time.perf_counter()
    ok, details = fn()
    return {"id": cid, "name": name, "pass": bool(ok), "details": details, "seconds": round(time.perf_counter() - t0, 3)}


def criterion_1() -> dict:
    def run():
        rows = []
        for n, q in SINGER_GRID:
            got = count_factorizations(singer_cycle(n, q), n)
            rows.append({"n": n, "q": q, "count": str(got), "expected": str((q**n - 1) ** (n - 1))})
        return all(r["count"] == r["expected"] for r in rows), rows

    return _timed(1, "shortest factorizations of Singer cycles", run)


def criterion_2() -> dict:
    def run():
        bad, checked = [], 0
        for n, q in SINGER_GRID:
            c = singer_cycle(n, q)
            det_c = c.det().value
            for ell in range(n, n + 4):
                got = count_factorizations(c, ell)
                want = tq(n, ell, check=False).eval(q)
                checked += 1
                if got != want:
                    bad.append({"n": n, "q": q, "ell": ell, "got": str(got), "want": str(want)})
                if q == 2:
                    continue
                for m in range(ell):
                    seq = valid_det_sequence(q, ell, m, det_c)
                    if seq is None:
                        continue
                    want_m = tq_nlm(n, ell, m, check=False).eval(q)
                    for order in (seq, seq[::-1]):
                        got_m = count_fixed_dets(c, order)
                        checked += 1
                        if got_m != want_m:
                            bad.append({"n": n, "q": q, "ell": ell, "dets": list(order), "got": str(got_m), "want": str(want_m)})
        return not bad, {"checked": checked, "mismatches": bad}

    return _timed(2, "formula values equal brute-force counts", run)


def criterion_3() -> dict:
    def run():
        bad, checked = [], 0
        for n in range(2, 7):
            for ell in range(0, n + 5):
                try:
                    tq(n, ell, check=True)
                    for m in range(ell):
                        tq_nlm(n, ell, m, check=True)
                        checked += 1
                    if not aggregate_identity(n, ell):
                        bad.append({"n": n, "ell": ell, "what": "aggregate"})
                except AssertionError as e:
                    bad.append({"n": n, "ell": ell, "what": str(e)})
                checked += 1
        return not bad, {"checked": checked, "failures": bad}

    return _timed(3, "route agreement of the closed forms", run)


def criterion_4() -> dict:
    def run():
        rows = []
        for n in range(2, 6):
            rows.append({"n": n, "ogf": ogf_check(n, n + 6), "egf": egf_check(n, n + 6)})
        return all(r["ogf"] and r["egf"] for r in rows), rows

    return _timed(4, "generating function coefficients", run)


def criterion_5() -> dict:
    def run():
        bad = []
        for n in range(2, 6):
            for ell in range(0, 9):
                a, b = tq_q2_character_form(n, ell), tq(n, ell, check=False).eval(2)
                if a != b:
                    bad.append({"n": n, "ell": ell, "character": str(a), "formula": str(b)})
        return not bad, {"mismatches": bad}

    return _timed(5, "q = 2 character form", run)


def criterion_6(heavy: bool = False) -> dict:
    def run():
        rows = []
        for n, q, ell in HURWITZ_LIST + (HURWITZ_HEAVY if heavy else []):
            rep = singer_orbit_check(n, q, ell)
            rows.append(
                {
                    "n": n,
                    "q": q,
                    "ell": ell,
                    "tuples": rep["tuple_count"],
                    "orbits_per_class": [len(c["orbit_sizes"]) for c in rep["classes"]],
                    "pass": rep["pass"],
                }
            )
        skipped = [] if heavy else [list(x) for x in HURWITZ_HEAVY]
        return all(r["pass"] for r in rows), {"cases": rows, "skipped_heavy": skipped}

    return _timed(6, "one Hurwitz orbit per determinant multiset", run)


def criterion_7() -> dict:
    def run():
        out = {}
        u = jordan_block(4, 2)
        tu = enumerate_factorizations(u, 3)
        out["jordan"] = {"tuples": len(tu), "orbits": sorted(orbit_decompose(u, tu).sizes)}
        c = singer_cycle(4, 2)
        tc = enumerate_factorizations(c, 4)
        out["singer"] = {"tuples": len(tc), "orbits": sorted(orbit_decompose(c, tc).sizes)}
        g = MatrixGF.companion(build_field(2), [1, 1, 1, 1, 1])
        tg = enumerate_factorizations(g, 4)
        out["order5"] = {"tuples": len(tg), "orbits": sorted(orbit_decompose(g, tg).sizes)}
        ok = (
            out["jordan"] == {"tuples": 64, "orbits": [16, 48]}
            and out["singer"] == {"tuples": 3375, "orbits": [3375]}
            and out["order5"]["tuples"] == 3375
            and len(out["order5"]["orbits"]) == 4
        )
        return ok, out

    return _timed(7, "orbit structure of three GL_4(F_2) elements", run)


def criterion_8() -> dict:
    def run():
        c = singer_cycle(4, 2)
        rep = pi_map_report(c, interval(c))
        small = []
        for n, q in [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3)]:
            r = pi_map_report(singer_cycle(n, q))
            small.append({"n": n, "q": q, "surjective": r["pi_surjective"]})
        ok = (
            rep["rank_sizes"] == [1, 60, 240, 60, 1]
            and rep["lattice_rank_sizes"] == [1, 15, 35, 15, 1]
            and [q_binomial(4, k, 2) for k in range(5)] == [1, 15, 35, 15, 1]
            and all(s["surjective"] for s in small)
        )
        return ok, {
            "gl4_f2": {k: rep[k] for k in ("rank_sizes", "lattice_rank_sizes", "pi_image_sizes", "fiber_multiset_by_rank")},
            "small": small,
        }

    return _timed(8, "interval below a Singer cycle", run)


def criterion_9() -> dict:
    def run():
        bad_f, bad_c, n_part = [], [], 0
        for size in range(1, 9):
            for lam in partitions(size):
                n_part += 1
                vals = {r: f_lambda(lam, r) for r in F_ROUTES}
                if len(set(vals.values())) != 1:
                    bad_f.append(lam.to_json())
                if not content_identity(lam):
                    bad_c.append(lam.to_json())
        bad_frob, checked = [], 0
        for q in (2, 3, 4, 5):
            for n in range(2, 7):
                for ell in range(0, n + 5):
                    cases = [ell] if q == 2 else list(range(ell))
                    for m in cases:
                        want = tq(n, ell, check=False).eval(2) if q == 2 else tq_nlm(n, ell, m, check=False).eval(q)
                        got = frobenius_count(n, q, ell, m)
                        checked += 1
                        if got != want:
                            bad_frob.append({"q": q, "n": n, "ell": ell, "m": m})
        ok = not bad_f and not bad_c and not bad_frob
        return ok, {
            "partitions": n_part,
            "route_mismatch": bad_f,
            "content_failures": bad_c,
            "character_counts_checked": checked,
            "character_mismatch": bad_frob,
        }

    return _timed(9, "hook formulas and character sums", run)


def criterion_10() -> dict:
    def run():
        cases = [((2, 4, 15), 0), ((2, 4, 5), -3), ((3, 2, 8), 0)]
        rows = [{"q": a, "s": b, "d": c, "value": cyclotomic_orbit_sum(a, b, c), "expected": e} for (a, b, c), e in cases]
        return all(r["value"] == r["expected"] for r in rows), rows

    return _timed(10, "cyclotomic orbit sums", run)


def criterion_11() -> dict:
    def run():
        rows = []
        for n, q in [(2, 3), (3, 2), (2, 4)]:
            rep = jm_commutation(n, q)
            rows.append({"n": n, "q": q, "pass": rep["pass"], "pairs": len(rep["pairs"])})
        return all(r["pass"] for r in rows), rows

    return _timed(11, "Jucys-Murphy commutation and centrality", run)


def symmetric_group_counts(n: int, ell_max: int) -> list[int]:
    """Tuples of l transpositions multiplying to a fixed n-cycle, by walking S_n."""
    ident = tuple(range(n))
    transp = []
    for i, j in itertools.combinations(range(n), 2):
        p = list(ident)
        p[i], p[j] = j, i
        transp.append(tuple(p))
    cycle = tuple((i + 1) % n for i in range(n))
    dist = Counter({ident: 1})
    out = []
    for ell in range(ell_max + 1):
        out.append(dist.get(cycle, 0))
        nxt: Counter = Counter()
        for g, c in dist.items():
            for t in transp:
                nxt[tuple(g[t[i]] for i in range(n))] += c
        dist = nxt
    return out


def criterion_12() -> dict:
    def run():
        denes = [{"n": n, "t": classical_t(n, n - 1), "expected": n ** (n - 2)} for n in range(2, 7)]
        jackson_bad = []
        for n in range(2, 6):
            brute = symmetric_group_counts(n, 7)
            for ell in range(8):
                if brute[ell] != classical_t(n, ell):
                    jackson_bad.append({"n": n, "ell": ell, "brute": brute[ell], "formula": classical_t(n, ell)})
        limit_bad = []
        for n in range(2, 6):
            for ell in range(0, 10):
                if q1_limit(n, ell) != q1_closed(n, ell):
                    limit_bad.append({"n": n, "ell": ell})
                for m in range(ell):
                    if q1_limit(n, ell, m) != q1_closed(n, ell, m):
                        limit_bad.append({"n": n, "ell": ell, "m": m})
        ok = all(d["t"] == d["expected"] for d in denes) and not jackson_bad and not limit_bad
        return ok, {"cycle_counts": denes, "symmetric_group_mismatch": jackson_bad, "limit_mismatch": limit_bad}

    return _timed(12, "classical and q -> 1 cross-checks", run)


CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
    11: criterion_11,
    12: criterion_12,
}


def run_criterion(cid: int, heavy: bool = False) -> dict:
    fn = CRITERIA[cid]
    return fn(heavy=heavy) if cid == 6 else fn()


def run_all(heavy: bool = False, only: list[int] | None = None) -> dict:
    results = [run_criterion(c, heavy) for c in (only or sorted(CRITERIA))]
    return {"pass": all(r["pass"] for r in results), "criteria": results}


