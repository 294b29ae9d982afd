import csv
import io
import json
from fractions import Fraction as F

import pytest

from chvatal_verify.cli import run
from chvatal_verify.report import FIELDS, VerdictRecord, compare, render


def _run(args, capsys, env=None):
    code = run(args, env={} if env is None else env)
    out = capsys.readouterr()
    return code, out.out, out.err


def _records(text):
    return [json.loads(line) for line in text.splitlines()]


def test_table_csv(capsys):
    code, out, _ = _run(["table", "--n", "4", "--format", "csv"], capsys)
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows == [["m", "q"], ["0", "1"], ["1", "189/256"], ["2", "11/16"], ["3", "175/256"], ["4", "1"]]


def test_usage_errors(capsys):
    code, _, err = _run(["verify-theorem", "--n-max", "1"], capsys)
    assert code == 2 and "usage" in err
    assert _run(["verify-theorem", "--bogus"], capsys)[0] == 2
    assert _run(["verify-theorem", "--jobs", "0"], capsys)[0] == 2
    assert _run(["verify-theorem", "--precision", "4"], capsys)[0] == 2
    assert _run(["table"], capsys)[0] == 2
    assert _run(["verify-lemma2", "--v-grid", "1/2,3/2"], capsys)[0] == 2


def test_theorem_record_shape(capsys):
    code, out, err = _run(["verify-theorem", "--n", "4", "--jobs", "1"], capsys)
    assert code == 0 and "0 failed" in err
    recs = _records(out)
    assert [list(r) for r in recs] == [list(FIELDS)] * 2
    ii = recs[1]
    assert ii == {"check": "theorem.ii", "n": 4, "m": 2, "lhs": "11/16", "rhs": "175/256",
                  "pass": True, "margin": "1/256", "mode": "exact", "elapsed_ns": 0}
    assert recs[0]["lhs"] == "175/256" and recs[0]["rhs"] == "11/16"


def test_both_mode_pairs_agree(capsys):
    code, out, err = _run(["verify-theorem", "--n-max", "40", "--mode", "both", "--jobs", "1"], capsys)
    assert code == 0 and "disagreements 0" in err
    recs = _records(out)
    exact = {(r["check"], r["n"]): r["pass"] for r in recs if r["mode"] == "exact"}
    cert = {(r["check"], r["n"]): r["pass"] for r in recs if r["mode"] == "certified"}
    assert exact == cert and len(exact) == 2 * 39


def test_rendered_values_witness_the_relation(capsys):
    # re-derive every pass field from the printed rationals
    code, out, _ = _run(["verify-theorem", "--n-max", "30", "--mode", "certified", "--precision", "10",
                         "--jobs", "1"], capsys)
    assert code == 0
    for r in _records(out):
        lhs, rhs = F(r["lhs"]), F(r["rhs"])
        assert F(r["margin"]) == lhs - rhs
        if r["check"] == "theorem.i":
            assert lhs < rhs


def test_env_and_flag_precedence(capsys):
    env = {"CHVERIFY_N_MIN": "5", "CHVERIFY_N_MAX": "6", "CHVERIFY_FORMAT": "csv"}
    code, out, _ = _run(["verify-theorem", "--jobs", "1"], capsys, env)
    assert code == 0 and out.startswith("check,n,m,")
    assert {row["n"] for row in csv.DictReader(io.StringIO(out))} == {"5", "6"}
    code, out, _ = _run(["verify-theorem", "--n-max", "5", "--format", "json", "--jobs", "1"], capsys, env)
    assert {r["n"] for r in _records(out)} == {5}
    assert _run(["verify-theorem"], capsys, {"CHVERIFY_JOBS": "many"})[0] == 2


@pytest.mark.parametrize("args", [
    ["verify-lemma1", "--n-max", "14"],
    ["verify-lemma2", "--n-max", "14", "--v-grid", "1/3,1"],
    ["verify-proof", "--s-max", "6"],
    ["verify-scalars", "--s-max", "3"],
    ["mc-check", "--samples", "4000"],
    ["emit-plot-data", "--n-max", "9", "--decimals", "5"],
])
def test_subcommands_are_deterministic_across_jobs(args, tmp_path, capsys):
    outs = []
    for jobs in ("1", "2"):
        path = tmp_path / f"r{jobs}.txt"
        assert run(args + ["--jobs", jobs, "--out", str(path)], env={}) == 0
        outs.append(path.read_bytes())
    capsys.readouterr()
    assert outs[0] == outs[1] and outs[0]


def test_plot_data(capsys):
    code, out, _ = _run(["emit-plot-data", "--n", "4", "--decimals", "4", "--format", "csv"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["q_decimal"] for r in rows] == ["1.0000", "0.7383", "0.6875", "0.6836", "1.0000"]
    assert [r["is_min"] for r in rows] == ["false", "false", "false", "true", "false"]
    assert {r["target_m"] for r in rows} == {"3"}


def test_failing_record_sets_exit_code(monkeypatch, capsys):
    import chvatal_verify.cli as cli

    def broken(n, mode, precision, timings):
        return [VerdictRecord("theorem.i", n, 0, F(1), F(0), "<", "exact")], (0, 0, 0)

    monkeypatch.setattr(cli, "theorem_item", broken)
    code, _, err = _run(["verify-theorem", "--n", "5", "--jobs", "1"], capsys)
    assert code == 1 and "COUNTEREXAMPLE" in err


def test_internal_error_exit_code(monkeypatch, capsys):
    import chvatal_verify.cli as cli

    def boom(*a, **k):
        raise RuntimeError("boom")

    monkeypatch.setattr(cli, "theorem_item", boom)
    assert _run(["verify-theorem", "--n", "5", "--jobs", "1"], capsys)[0] == 3


def test_csv_rendering_quotes_and_blanks():
    rec = VerdictRecord("scalar.eq6@x=3/2,v=1", 0, None, F(1, 3), F(1, 4), ">", "enclosure")
    text = render([rec.row()], "csv", FIELDS)
    row = list(csv.reader(io.StringIO(text)))[1]
    assert row == ["scalar.eq6@x=3/2,v=1", "0", "", "1/3", "1/4", "true", "1/12", "enclosure", "0"]
    assert text.endswith("\r\n") and '"scalar.eq6@x=3/2,v=1"' in text


def test_compare_relations():
    assert compare(F(1), "<=", F(1)) and not compare(F(1), "<", F(1))
    with pytest.raises(ValueError):
        compare(F(1), "?", F(1))
