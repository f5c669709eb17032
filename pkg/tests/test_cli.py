import json

import pytest

from singerfact.cli import main, render


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_count_singer(capsys):
    code, out, _ = run(capsys, "count", "--n", "4", "--q", "2", "--len", "4", "--target", "singer")
    assert code == 0
    assert json.loads(out)["count"] == "3375"


def test_count_targets(capsys):
    code, out, _ = run(capsys, "count", "--n", "4", "--q", "2", "--len", "4", "--target", "charpoly:1,1,1,1")
    assert code == 0 and json.loads(out)["count"] == "3375"
    code, out, _ = run(capsys, "count", "--n", "2", "--q", "3", "--len", "2", "--target", "unipotent")
    assert code == 0 and int(json.loads(out)["count"]) > 0
    code, out, _ = run(capsys, "count", "--n", "2", "--q", "2", "--len", "1", "--target", "key:11")
    assert code == 0 and json.loads(out)["count"] == "1"


def test_formula_all_routes(capsys):
    code, out, _ = run(capsys, "formula", "--n", "3", "--len", "4", "--route", "all", "--q", "2")
    rep = json.loads(out)
    assert code == 0 and rep["agree"]
    assert len(rep["routes"]) == 3 and len(set(rep["routes"].values())) == 1
    assert set(rep["values"].values()) == {"1029"}


def test_formula_with_m(capsys):
    code, out, _ = run(capsys, "formula", "--n", "2", "--len", "3", "--m", "1", "--q", "5")
    rep = json.loads(out)
    assert code == 0 and set(rep["routes"]) == {"binom", "diff"}
    code, _, err = run(capsys, "formula", "--n", "3", "--len", "3", "--m", "3")
    assert code == 2 and "m" in err


def test_verify_identities(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "identities", "--max-n", "5")
    rep = json.loads(out)
    assert code == 0 and rep["pass"] and not rep["failed"]


def test_verify_charvals(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "charvals", "--max-n", "4")
    assert code == 0 and json.loads(out)["pass"]


def test_count_dets(capsys):
    code, out, _ = run(capsys, "count-dets", "--n", "2", "--q", "3", "--len", "2", "--m", "1")
    assert code == 0 and json.loads(out)["count"] == "4"
    code, out, _ = run(capsys, "count-dets", "--n", "2", "--q", "3", "--len", "2", "--dets", "1,1")
    rep = json.loads(out)
    assert code == 0 and rep["count"] == "0" and rep["obstructed"]


def test_hurwitz_csv(capsys):
    code, out, _ = run(
        capsys, "hurwitz", "--n", "4", "--q", "2", "--len", "3", "--target", "unipotent", "--format", "csv"
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "det_multiset,tuple_count,orbit_sizes"
    assert lines[1] == "1 1 1,64,16 48"


def test_interval_json(capsys):
    code, out, _ = run(capsys, "interval", "--n", "4", "--q", "2")
    rep = json.loads(out)
    assert code == 0 and rep["rank_sizes"] == [1, 60, 240, 60, 1]


def test_jm(capsys):
    code, out, _ = run(capsys, "jm", "--n", "2", "--q", "3")
    assert code == 0 and json.loads(out)["pass"]


def test_survey_table(capsys):
    code, out, _ = run(capsys, "survey-re", "--n", "2", "--q", "3", "--len", "2", "--format", "table")
    assert code == 0
    assert out.splitlines()[0].split() == ["charpoly", "count"]
    assert out.count(" 8") == 3


def test_survey_heavy_gate(capsys):
    code, out, _ = run(capsys, "survey-re", "--n", "4", "--q", "3", "--len", "4")
    assert code == 3 and json.loads(out)["error"] == "budget exceeded"


def test_budget_exit_code(capsys):
    code, out, _ = run(capsys, "hurwitz", "--n", "4", "--q", "2", "--len", "6", "--budget", "1000")
    rep = json.loads(out)
    assert code == 3 and rep["progress"]["budget"] == 1000
    code, out, _ = run(capsys, "count", "--n", "4", "--q", "2", "--len", "6", "--mode", "sparse", "--cap", "10")
    assert code == 3 and "progress" in json.loads(out)


@pytest.mark.parametrize(
    "argv",
    [
        ["count", "--n", "2", "--q", "6", "--len", "2"],
        ["count", "--n", "2", "--q", "3", "--len", "2", "--target", "bogus"],
        ["count", "--n", "2", "--q", "3", "--len", "2", "--target", "charpoly:0,1"],
        ["count", "--n", "1", "--q", "2", "--len", "1"],
        ["nonsense"],
        ["count", "--n", "2"],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_repro_deterministic(capsys):
    _, first, _ = run(capsys, "repro", "--only", "5,10")
    _, second, _ = run(capsys, "repro", "--only", "5,10")
    assert first == second
    rep = json.loads(first)
    assert rep["pass"] and [c["id"] for c in rep["criteria"]] == [5, 10]


def test_threads_env(capsys, monkeypatch):
    monkeypatch.setenv("SINGERFACT_THREADS", "4")
    _, a, _ = run(capsys, "count", "--n", "3", "--q", "2", "--len", "4")
    monkeypatch.setenv("SINGERFACT_THREADS", "1")
    _, b, _ = run(capsys, "count", "--n", "3", "--q", "2", "--len", "4")
    assert a == b and json.loads(a)["count"] == "1029"
    monkeypatch.setenv("SINGERFACT_THREADS", "0")
    code, _, _ = run(capsys, "count", "--n", "3", "--q", "2", "--len", "4")
    assert code == 2


def test_render_table_for_flat_report():
    text = render({"a": 1, "b": [1, 2]}, "table")
    assert text.splitlines()[0].split() == ["key", "value"]
