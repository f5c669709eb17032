"""Command-line entry point: ``singerfact <subcommand> ...``.

Exit codes: 0 when every requested check passes, 1 when a check fails,
2 for usage errors, 3 when a resource budget is exceeded (a partial JSON
report is still printed) and 4 for internal invariant violations.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys

from . import __version__

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET, EXIT_INVARIANT = 0, 1, 2, 3, 4


class UsageError(ValueError):
    pass


class BudgetError(RuntimeError):
    def __init__(self, message: str, partial: dict | None = None):
        super().__init__(message)
        self.partial = partial or {}


# ---------------------------------------------------------------------------
# targets


def parse_target(text: str, n: int, q: int):
    from .gf import field_of_order
    from .glnq import MatrixGF, singer_cycle
    from .hurwitz import jordan_block

    F = field_of_order(q)
    if text == "singer":
        return singer_cycle(n, q)
    if text == "unipotent":
        return jordan_block(n, q)
    kind, _, arg = text.partition(":")
    if kind == "charpoly":
        coeffs = [int(x) for x in arg.split(",") if x.strip()]
        if len(coeffs) == n:
            coeffs.append(1)
        if len(coeffs) != n + 1 or coeffs[-1] != 1:
            raise UsageError(f"charpoly needs {n} low coefficients (monic degree {n} implied)")
        if any(not 0 <= c < q for c in coeffs):
            raise UsageError(f"coefficients must be integers in [0, {q})")
        if coeffs[0] == 0:
            raise UsageError("constant term must be nonzero for an invertible companion matrix")
        return MatrixGF.companion(F, coeffs)
    if kind == "key":
        try:
            m = MatrixGF.from_key(F, n, int(arg))
        except ValueError as e:
            raise UsageError(str(e)) from e
        if m.det().is_zero():
            raise UsageError("key does not encode an invertible matrix")
        return m
    raise UsageError(f"unknown target {text!r}; use singer, unipotent, charpoly:c0,...,c(n-1) or key:N")


def parse_ints(s: str | None) -> list[int] | None:
    if s is None:
        return None
    return [int(x) for x in s.split(",") if x.strip()]


# ---------------------------------------------------------------------------
# subcommands; each returns (report, passed)


def cmd_count(a):
    from .factor_count import StepPlan, count_factorizations, count_json

    c = parse_target(a.target, a.n, a.q)
    plan = StepPlan.all_reflections(a.len)
    val = count_factorizations(c, plan, mode=a.mode, mitm=a.mitm, cap=a.cap)
    return count_json(c, plan, val), True


def cmd_count_dets(a):
    from .factor_count import StepPlan, count_fixed_dets
    from .repro import valid_det_sequence

    c = parse_target(a.target, a.n, a.q)
    dets = parse_ints(a.dets)
    if dets is None:
        if a.m is None:
            raise UsageError("give --dets or --m")
        dets = valid_det_sequence(a.q, a.len, a.m, c.det().value)
        if dets is None:
            rep = {"n": a.n, "q": a.q, "ell": a.len, "m": a.m, "count": "0", "obstructed": True, "dets": None}
            return rep, True
    if len(dets) != a.len:
        raise UsageError("--dets must have --len entries")
    val = count_fixed_dets(c, dets, mode=a.mode, cap=a.cap)
    rep = {
        "n": a.n,
        "q": a.q,
        "ell": a.len,
        "target_charpoly": c.charpoly(),
        "filter": StepPlan.from_alphas(dets).describe(),
        "count": str(int(val)),
        "obstructed": val.obstructed,
    }
    return rep, True


def cmd_formula(a):
    from .qformula import TQ_NLM_ROUTES, TQ_ROUTES, HypothesisError

    routes = TQ_ROUTES if a.m is None else TQ_NLM_ROUTES
    names = sorted(routes) if a.route == "all" else [a.route]
    if any(r not in routes for r in names):
        raise UsageError(f"route must be one of {sorted(routes)} or all")
    try:
        polys = {r: routes[r](a.n, a.len) if a.m is None else routes[r](a.n, a.len, a.m) for r in names}
    except HypothesisError as e:
        raise UsageError(str(e)) from e
    agree = len({str(p) for p in polys.values()}) == 1
    rep = {"n": a.n, "ell": a.len, "m": a.m, "routes": {r: str(p) for r, p in polys.items()}, "agree": agree}
    if a.q is not None:
        rep["values"] = {r: str(p.eval(a.q)) for r, p in polys.items()}
    if not agree:
        raise InvariantError("closed-form routes disagree", rep)
    return rep, True


def _identity_checks(max_n: int, seed: int) -> list[dict]:
    from .qformula import (
        QLaurent,
        QPoly,
        aggregate_identity,
        delta_q,
        delta_q_closed,
        egf_check,
        ogf_check,
        q_binomial_theorem_sides,
        tq,
        tq_nlm,
        tq_q2_character_form,
    )

    out = []

    def add(name, ok):
        out.append({"check": name, "pass": bool(ok)})

    for N in range(0, 13):
        lhs, rhs = q_binomial_theorem_sides(N)
        add(f"q-binomial theorem N={N}", lhs == rhs)
    rng = random.Random(seed)
    for i in range(100):
        e, k = rng.randint(-4, 8), rng.randint(0, 4)
        f = QLaurent.monomial(e, QPoly.const(rng.randint(1, 5)))
        add(f"q-difference closed form sample {i} (x^{e}, {k} steps)", delta_q(f, k) == delta_q_closed(f, k))
    for n in range(2, max_n + 1):
        for ell in range(0, n + 5):
            try:
                tq(n, ell, check=True)
                ok = True
            except AssertionError:
                ok = False
            add(f"t_q({n},{ell}) routes", ok)
            for m in range(ell):
                try:
                    tq_nlm(n, ell, m, check=True)
                    ok = True
                except AssertionError:
                    ok = False
                add(f"t_q({n},{ell},{m}) routes", ok)
            add(f"aggregate over m, n={n} l={ell}", aggregate_identity(n, ell))
            if ell <= 8:
                add(f"q=2 character form n={n} l={ell}", tq_q2_character_form(n, ell) == tq(n, ell, check=False).eval(2))
        if n <= 5:
            add(f"ogf n={n}", ogf_check(n, n + 6))
            add(f"egf n={n}", egf_check(n, n + 6))
    return out


def _charval_checks(max_n: int) -> list[dict]:
    from .charvals import F_ROUTES, content_identity, f_lambda, frobenius_count, partitions
    from .qformula import tq, tq_nlm

    out = []
    for size in range(1, max(max_n, 1) + 1):
        for lam in partitions(size):
            vals = {str(f_lambda(lam, r)) for r in F_ROUTES}
            out.append({"check": f"f^{lam.to_json()} routes", "pass": len(vals) == 1})
            out.append({"check": f"content identity {lam.to_json()}", "pass": content_identity(lam)})
    for q in (2, 3, 4, 5):
        for n in range(2, max_n + 1):
            for ell in range(n + 5):
                for m in ([ell] if q == 2 else range(ell)):
                    want = tq(n, ell, check=False).eval(2) if q == 2 else tq_nlm(n, ell, m, check=False).eval(q)
                    out.append(
                        {"check": f"character count q={q} n={n} l={ell} m={m}", "pass": frobenius_count(n, q, ell, m) == want}
                    )
    return out


def cmd_verify(a):
    checks = []
    if a.suite in ("identities", "all"):
        checks += _identity_checks(a.max_n, a.seed)
    if a.suite in ("charvals", "all"):
        checks += _charval_checks(a.max_n)
    failed = [c["check"] for c in checks if not c["pass"]]
    rep = {
        "suite": a.suite,
        "max_n": a.max_n,
        "checks": len(checks),
        "failed": failed,
        "pass": not failed,
        "rows": checks,
    }
    return rep, not failed


def cmd_hurwitz(a):
    from .hurwitz import orbit_report

    c = parse_target(a.target, a.n, a.q)
    rep = orbit_report(c, a.len, budget=a.budget)
    rep = {"n": a.n, "q": a.q, **rep}
    rep["single_orbit_per_class"] = all(len(k["orbit_sizes"]) == 1 for k in rep["classes"])
    rep["rows"] = [
        {"det_multiset": " ".join(map(str, k["det_multiset"])), "tuple_count": k["tuple_count"], "orbit_sizes": " ".join(map(str, k["orbit_sizes"]))}
        for k in rep["classes"]
    ]
    return rep, True


def cmd_interval(a):
    from .absorder import interval_json

    c = parse_target(a.target, a.n, a.q)
    rep = interval_json(c)
    rep["rows"] = [
        {"rank": k, "interval": rep["rank_sizes"][k], "subspaces": rep["lattice_rank_sizes"][k], "image": rep["pi_image_sizes"][k]}
        for k in range(len(rep["rank_sizes"]))
    ]
    return rep, True


def cmd_jm(a):
    from .factor_count import jm_commutation

    rep = jm_commutation(a.n, a.q, full_conjugation=not a.generators_only)
    return rep, rep["pass"]


SURVEY_LIGHT_BOUND = 2_000_000


def cmd_survey(a):
    from .factor_count import survey_regular_elliptic
    from .glnq import gl_order

    if gl_order(a.n, a.q) > SURVEY_LIGHT_BOUND and not a.heavy:
        raise BudgetError(
            f"|GL_{a.n}(F_{a.q})| = {gl_order(a.n, a.q)} is above {SURVEY_LIGHT_BOUND}; pass --heavy",
            {"n": a.n, "q": a.q, "ell": a.len, "counts": {}},
        )
    table = survey_regular_elliptic(a.n, a.q, a.len)
    values = sorted({v for v in table.values()})
    rows = [{"charpoly": " ".join(map(str, k)), "count": str(v)} for k, v in sorted(table.items())]
    rep = {
        "n": a.n,
        "q": a.q,
        "ell": a.len,
        "class_count": len(rows),
        "distinct_counts": [str(v) for v in values],
        "all_equal": len(values) <= 1,
        "rows": rows,
    }
    return rep, True


def cmd_repro(a):
    from .repro import run_all

    only = parse_ints(a.only)
    rep = run_all(heavy=a.heavy, only=only)
    if not a.timings:
        for c in rep["criteria"]:
            c.pop("seconds", None)
    rep["rows"] = [{"id": c["id"], "name": c["name"], "pass": c["pass"]} for c in rep["criteria"]]
    return rep, rep["pass"]


class InvariantError(AssertionError):
    def __init__(self, message: str, partial: dict | None = None):
        super().__init__(message)
        self.partial = partial or {}


# ---------------------------------------------------------------------------
# output


def _scalar(v):
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    return v


def render(rep: dict, fmt: str) -> str:
    if fmt == "json":
        body = {k: v for k, v in rep.items() if k != "rows"} if "rows" in rep and _has_structured(rep) else rep
        return json.dumps(body, sort_keys=True, default=str) + "\n"
    rows = rep.get("rows")
    if rows is None:
        rows = [{"key": k, "value": _scalar(v)} for k, v in sorted(rep.items())]
    if not rows:
        return ""
    cols = list(rows[0])
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({c: _scalar(r.get(c)) for c in cols})
        return buf.getvalue()
    widths = {c: max(len(str(c)), *(len(str(_scalar(r.get(c)))) for r in rows)) for c in cols}
    lines = ["  ".join(str(c).ljust(widths[c]) for c in cols)]
    lines.append("  ".join("-" * widths[c] for c in cols))
    for r in rows:
        lines.append("  ".join(str(_scalar(r.get(c))).ljust(widths[c]) for c in cols))
    return "\n".join(lines) + "\n"


def _has_structured(rep: dict) -> bool:
    # rows duplicate a structured field; json keeps only the structured one
    return any(k in rep for k in ("classes", "criteria", "rank_sizes"))


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="singerfact", description="Reflection factorizations in GL_n(F_q).")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "table"], default="json")
    common.add_argument("--threads", type=int, default=None, help="worker count (default: SINGERFACT_THREADS or 1)")
    sub = p.add_subparsers(dest="cmd", required=True)

    def group_args(sp, need_len=True, target=True):
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--q", type=int, required=True)
        if need_len:
            sp.add_argument("--len", type=int, required=True, help="number of factors")
        if target:
            sp.add_argument("--target", default="singer")

    sp = sub.add_parser("count", parents=[common], help="count reflection factorizations")
    group_args(sp)
    sp.add_argument("--mode", choices=["auto", "dense", "sparse"], default="auto")
    sp.add_argument("--mitm", action="store_true")
    sp.add_argument("--cap", type=int, default=50_000_000, help="sparse support cap")
    sp.set_defaults(func=cmd_count)

    sp = sub.add_parser("count-dets", parents=[common], help="count with prescribed determinants")
    group_args(sp)
    sp.add_argument("--dets", help="comma separated determinants (integer field codes)")
    sp.add_argument("--m", type=int, help="number of determinant-one factors")
    sp.add_argument("--mode", choices=["auto", "dense", "sparse"], default="auto")
    sp.add_argument("--cap", type=int, default=50_000_000)
    sp.set_defaults(func=cmd_count_dets)

    sp = sub.add_parser("formula", parents=[common], help="closed forms as polynomials in q")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--len", type=int, required=True)
    sp.add_argument("--m", type=int)
    sp.add_argument("--route", default="all")
    sp.add_argument("--q", type=int, help="also evaluate at this q")
    sp.set_defaults(func=cmd_formula)

    sp = sub.add_parser("verify", parents=[common], help="exhaustive identity suites")
    sp.add_argument("--suite", choices=["identities", "charvals", "all"], default="all")
    sp.add_argument("--max-n", type=int, default=5)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("hurwitz", parents=[common], help="Hurwitz orbits of short factorizations")
    group_args(sp)
    sp.add_argument("--budget", type=int, default=5_000_000, help="maximum number of tuples")
    sp.set_defaults(func=cmd_hurwitz)

    sp = sub.add_parser("interval", parents=[common], help="interval [e, c] and its fixed-space map")
    group_args(sp, need_len=False)
    sp.set_defaults(func=cmd_interval)

    sp = sub.add_parser("jm", parents=[common], help="Jucys-Murphy commutation report")
    group_args(sp, need_len=False, target=False)
    sp.add_argument("--generators-only", action="store_true", help="test centrality against generators only")
    sp.set_defaults(func=cmd_jm)

    sp = sub.add_parser("survey-re", parents=[common], help="counts for every regular elliptic class")
    group_args(sp, target=False)
    sp.add_argument("--heavy", action="store_true")
    sp.set_defaults(func=cmd_survey)

    sp = sub.add_parser("repro", parents=[common], help="run the acceptance suite")
    sp.add_argument("--heavy", action="store_true", help="include the long Hurwitz case")
    sp.add_argument("--only", help="comma separated criterion ids")
    sp.add_argument("--timings", action="store_true", help="include wall-clock seconds (not deterministic)")
    sp.set_defaults(func=cmd_repro)
    return p


def _threads(a) -> int:
    env = os.environ.get("SINGERFACT_THREADS")
    t = int(env) if env else (a.threads or 1)
    if t < 1:
        raise UsageError("thread count must be positive")
    return t


def _validate(a) -> None:
    from .gf import FieldError, field_of_order

    if getattr(a, "q", None) is not None:
        try:
            field_of_order(a.q)
        except (FieldError, ValueError) as e:
            raise UsageError(f"q = {a.q}: {e}") from e
    if getattr(a, "n", None) is not None and a.n < 1:
        raise UsageError("n must be positive")
    if getattr(a, "len", None) is not None and a.len < 0:
        raise UsageError("--len must be nonnegative")
    for name in ("budget", "cap", "max_n"):
        v = getattr(a, name, None)
        if v is not None and v < 1:
            raise UsageError(f"--{name.replace('_', '-')} must be positive")


def main(argv: list[str] | None = None) -> int:
    from .factor_count import BudgetExceeded, DegenerateCaseError
    from .glnq import BoundExceeded
    from .hurwitz import EnumerationBudgetExceeded

    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    out = sys.stdout
    try:
        _validate(a)
        _threads(a)
        rep, ok = a.func(a)
    except (UsageError, DegenerateCaseError) as e:
        print(f"singerfact: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (BudgetError, BudgetExceeded, EnumerationBudgetExceeded, BoundExceeded) as e:
        partial = {"error": "budget exceeded", "message": str(e)}
        partial.update(getattr(e, "partial", {}) or {})
        if isinstance(e, BudgetExceeded):
            partial["progress"] = e.progress()
        if isinstance(e, EnumerationBudgetExceeded):
            partial["progress"] = {"depth": e.depth, "size": e.size, "budget": e.budget}
        out.write(json.dumps(partial, sort_keys=True, default=str) + "\n")
        return EXIT_BUDGET
    except (InvariantError, AssertionError) as e:
        partial = {"error": "invariant violation", "message": str(e)}
        partial.update(getattr(e, "partial", {}) or {})
        out.write(json.dumps(partial, sort_keys=True, default=str) + "\n")
        return EXIT_INVARIANT
    out.write(render(rep, a.format))
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
