import json
import subprocess
import sys

import pytest

from normfinsler import cli, pipeline, tables
from normfinsler.schemas import CorankReport, EqualRankReport, MetricFile, validate_report


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_roots_text(capsys):
    code, out, _ = run(capsys, "roots", "--type", "B", "--rank", "3")
    assert code == 0
    assert "18 roots" in out and "(1, -1, 0), (0, 1, -1), (0, 0, 1)" in out


def test_equal_rank_json_is_schema_valid(capsys):
    code, out, _ = run(capsys, "classify", "equal-rank", "--type", "C", "--rank", "3", "--json")
    assert code == 0
    doc = EqualRankReport.model_validate(json.loads(out))
    assert sorted(s.h_type for s in doc.survivors) == ["A1+B2", "B2+R"]


def test_global_flags_before_the_subcommand(capsys):
    code, out, _ = run(capsys, "--json", "-", "classify", "corank1", "--type", "B2")
    assert code == 0
    CorankReport.model_validate(json.loads(out))


def test_d4_has_no_equal_rank_survivors(capsys):
    code, out, _ = run(capsys, "classify", "equal-rank", "--type", "D", "--rank", "4", "--json")
    assert code == 0 and json.loads(out)["survivors"] == []


def test_reports_are_byte_stable(capsys):
    _, first, _ = run(capsys, "classify", "corank1", "--type", "B3", "--json", "--trace")
    _, second, _ = run(capsys, "classify", "corank1", "--type", "B3", "--json", "--trace")
    assert first == second


def test_editing_the_expectation_changes_diffs_not_verdicts(capsys, monkeypatch):
    _, clean, _ = run(capsys, "classify", "corank1", "--type", "B2", "--json")
    edited = dict(tables.CORANK_ONE_OUTCOMES)
    edited["B2"] = {k: ("Saturated(A1)", None, None) for k in edited["B2"]}
    monkeypatch.setattr(tables, "CORANK_ONE_OUTCOMES", edited)
    code, dirty, _ = run(capsys, "classify", "corank1", "--type", "B2", "--json")
    assert code == pipeline.EXIT_DIFF
    a, b = json.loads(clean), json.loads(dirty)
    assert a["rows"] == b["rows"]
    assert a["diffs"] == [] and b["diffs"]


def test_explain_traces(capsys):
    code, out, _ = run(capsys, "explain", "F4:(e1+e2, e2)")
    assert code == 0
    assert out.splitlines()[-1] == "outcome: Contradiction(D)"

    code, out, _ = run(capsys, "explain", "D4:(e1+e2, -e1+e2)")
    assert code == 0 and "outcome: Saturated(B3)" in out

    code, out, _ = run(capsys, "explain", "B2:(e1+e2, -e2)")
    assert code == 0 and "[explicit-model oracle]" in out and "Saturated(A1)" in out


def test_unknown_seed_exits_one(capsys):
    code, _, err = run(capsys, "explain", "B2:(e1, e1)")
    assert code == pipeline.EXIT_ERROR and "no seed" in err
    code, _, err = run(capsys, "explain", "no-colon")
    assert code == pipeline.EXIT_ERROR


def test_condition_r(capsys):
    code, out, _ = run(capsys, "condition-r", "--space", "su(3)/su(2)", "--t", "1/10,1/2", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["fails_condition_R"] and doc["diffs"] == []
    code, out, _ = run(capsys, "condition-r", "--space", "so(4)/so(3)", "--pairs", "20")
    assert code == 0 and "20/20" in out


def test_finsler_curvature(capsys, tmp_path):
    code, out, _ = run(capsys, "finsler", "curvature", "--metric", "sphere2",
                       "--x", "0.3,0.2", "--y", "1,0.5", "--v", "-0.2,1", "--json")
    row = json.loads(out)["rows"][0]
    assert code == 0 and abs(row["K"] - 1) < 1e-6

    path = tmp_path / "metric.json"
    path.write_text(json.dumps({"dimension": 2, "kind": "custom_expression",
                                "parameters": {"F": "sqrt(y1**2 + y2**2)/x2"}}))
    code, out, _ = run(capsys, "finsler", "curvature", "--metric", str(path),
                       "--x", "0,1", "--y", "1,0", "--v", "0,1", "--json")
    assert code == 0 and abs(json.loads(out)["rows"][0]["K"] + 1) < 1e-6

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"dimension": 2, "kind": "bogus"}))
    code, _, err = run(capsys, "finsler", "curvature", "--metric", str(bad), "--x", "0,1", "--y", "1,0", "--v", "0,1")
    assert code == pipeline.EXIT_ERROR and "kind" in err


def test_degenerate_flag_exits_one(capsys):
    code, _, err = run(capsys, "finsler", "curvature", "--metric", "sphere2",
                       "--x", "1,0", "--y", "1,0.5", "--v", "2,1")
    assert code == pipeline.EXIT_ERROR


def test_export_roundtrip(capsys, tmp_path):
    report = tmp_path / "c3.json"
    run(capsys, "classify", "equal-rank", "--type", "C", "--rank", "3", "--json", str(report))
    again = tmp_path / "again.json"
    assert run(capsys, "export", str(report), "--out", str(again))[0] == 0
    assert report.read_bytes() == again.read_bytes()

    code, md, _ = run(capsys, "export", str(report), "--format", "markdown")
    assert code == 0
    rows = [line for line in md.splitlines() if line.startswith("| ") and "h |" not in line]
    assert len(rows) == 2


def test_export_rejects_non_reports(capsys, tmp_path):
    junk = tmp_path / "junk.json"
    junk.write_text('{"hello": 1}')
    assert run(capsys, "export", str(junk))[0] == pipeline.EXIT_ERROR


def test_missing_arguments_exit_two_from_argparse():
    with pytest.raises(SystemExit) as exc:
        cli.main(["roots"])
    assert exc.value.code == 2


def test_small_caps_verification(capsys):
    code, out, _ = run(capsys, "verify", "theorem1", "--caps", "A=2,B=2,C=3,D=4", "--skip-exceptional", "--json")
    doc = json.loads(out)
    validate_report(doc)
    assert code == 0 and doc["exit_code"] == 0
    d4 = next(s for s in doc["equal_rank"] if s["g"] == {"type": "D", "rank": 4})
    assert d4["survivors"] == []


def test_metric_file_schema():
    doc = MetricFile.model_validate({"dimension": 3, "kind": "randers", "parameters": {"b": [0, 0, "1/4"]}})
    assert doc.kind == "randers"
    with pytest.raises(ValueError):
        MetricFile.model_validate({"dimension": 0, "kind": "randers"})


def test_console_script_entry_point():
    res = subprocess.run([sys.executable, "-m", "normfinsler.cli", "roots", "--type", "G2"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "12 roots" in res.stdout
