"""Acceptance criteria, one test and one printed PASS/FAIL line each.

Run directly (``python tests/test_acceptance.py``) or through pytest.
The long Hurwitz case is included; set SINGERFACT_LIGHT=1 to skip it.
"""

import os
import sys

import pytest

from singerfact.repro import CRITERIA, run_criterion

HEAVY = os.environ.get("SINGERFACT_LIGHT") != "1"


def _line(res: dict) -> str:
    status = "PASS" if res["pass"] else "FAIL"
    return f"[{status}] criterion {res['id']:>2}: {res['name']} ({res['seconds']:.1f}s)"


@pytest.mark.parametrize("cid", sorted(CRITERIA))
def test_criterion(cid, capsys):
    res = run_criterion(cid, heavy=HEAVY)
    with capsys.disabled():
        print("\n" + _line(res))
    assert res["pass"], res["details"]


if __name__ == "__main__":
    ok = True
    for cid in sorted(CRITERIA):
        res = run_criterion(cid, heavy=HEAVY)
        print(_line(res), flush=True)
        ok &= res["pass"]
    sys.exit(0 if ok else 1)
