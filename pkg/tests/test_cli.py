import json
import re
import subprocess
import sys

import jsonschema
import pytest

from limfrob import cli, pipeline
from limfrob.report import Check, Report, Section, dec_rational, enc_laurent, enc_rational, load_schema
from limfrob.algebra.poly import laurent

SCHEMA = load_schema()


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def text_statuses(text):
    return [(m.group(2), m.group(1)) for m in
            re.finditer(r"^  (PASS|FAIL|INDETERMINATE)\s+(\S+) <", text, re.M)]


def json_statuses(doc):
    reports = doc["reports"] if "reports" in doc else [doc]
    status = {True: "PASS", False: "FAIL", None: "INDETERMINATE"}
    return [(c["name"], status[c["passed"]])
            for r in reports for s in r["sections"].values() for c in s["checks"]]


@pytest.mark.parametrize("command", pipeline.COMMANDS)
@pytest.mark.parametrize("weights", ["2,2", "1,1", "3"])
def test_commands_schema_and_agreement(capsys, command, weights):
    code_j, out_j, _ = run_cli(capsys, command, "--weights", weights, "--format", "json")
    code_t, out_t, _ = run_cli(capsys, command, "--weights", weights, "--format", "text")
    doc = json.loads(out_j)
    jsonschema.validate(doc, SCHEMA)
    assert code_j == code_t
    assert json_statuses(doc) == text_statuses(out_t)
    assert ("OVERALL PASS" in out_t) == doc["passed"]
    assert Report.from_dict(doc).to_dict() == doc


def test_check_22_passes(capsys):
    code, out, _ = run_cli(capsys, "check", "--weights", "2,2")
    assert code == 0 and "FAIL" not in out and "OVERALL PASS" in out


def test_manifold_11(capsys):
    code, out, _ = run_cli(capsys, "manifold", "--weights", "1,1", "--format", "json")
    assert code == 0
    data = json.loads(out)["sections"]["manifold"]["data"]
    assert data["potential_text"] == "(1/2)*x1^2*x3 + (1/2)*x1*x2^2"
    assert {"coeff": "3/1", "monomial": {"x1": 1, "x2": 1, "x3": 0}} in data["homogeneity_remainder"]


def test_manifold_obstruction_exit_2(capsys):
    code, out, _ = run_cli(capsys, "manifold", "--weights", "2,2", "--format", "json")
    assert code == cli.EXIT_OBSTRUCTION
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    assert "no pre-primitive section" in doc["obstruction"]
    assert "2 Jordan blocks" in doc["obstruction"]


def test_all_reports_obstruction_without_exit_2(capsys):
    code, out, _ = run_cli(capsys, "all", "--weights", "2,2")
    assert code == 0 and "OBSTRUCTION" in out


@pytest.mark.parametrize("argv", [
    ["check", "--weights", "2,x"],
    ["check", "--weights", "0,2"],
    ["check", "--weights", ""],
    ["check"],
    ["frobnicate", "--weights", "2"],
    ["check", "--weights", "2", "--format", "xml"],
    ["check", "--grid", "3"],
    ["check", "--grid", "0,2"],
    ["check", "--weights", "2", "--grid", "2,2"],
])
def test_usage_errors_exit_3(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == cli.EXIT_USAGE
    assert "usage" in capsys.readouterr().err


def test_internal_error_exit_1(capsys, monkeypatch):
    def boom(*_):
        raise RuntimeError("boom")

    monkeypatch.setattr(cli, "run", boom)
    code, _, err = run_cli(capsys, "spectrum", "--weights", "2")
    assert code == cli.EXIT_FAIL and "boom" in err


def test_failed_check_exit_1(capsys, monkeypatch):
    def failing(command, weights):
        r = Report(command, list(weights), 3, 1)
        r.sections["x"] = Section([Check("bad", "nowhere", False)])
        return r

    monkeypatch.setattr(cli, "run", failing)
    code, out, _ = run_cli(capsys, "spectrum", "--weights", "2")
    assert code == cli.EXIT_FAIL and "OVERALL FAIL" in out


def test_grid_batch(capsys, tmp_path):
    dest = tmp_path / "grid.json"
    code, out, _ = run_cli(capsys, "check", "--grid", "2,3", "--format", "json", "--out", str(dest))
    assert code == 0 and out == ""
    doc = json.loads(dest.read_text())
    jsonschema.validate(doc, SCHEMA)
    assert doc["passed"]
    assert [r["weights"] for r in doc["reports"]] == [[1], [2], [3], [1, 1], [1, 2], [1, 3],
                                                       [2, 2], [2, 3], [3, 3]]


def test_grid_jobs_deterministic(capsys):
    _, serial, _ = run_cli(capsys, "limit", "--grid", "2,3", "--format", "json")
    _, parallel, _ = run_cli(capsys, "limit", "--grid", "2,3", "--format", "json", "--jobs", "2")
    assert serial == parallel


def test_grid_text_summary(capsys):
    code, out, _ = run_cli(capsys, "spectrum", "--grid", "1,3")
    assert code == 0 and out.rstrip().endswith("BATCH PASS 3/3")


def test_grid_manifold_exit_2(capsys):
    code, _, _ = run_cli(capsys, "manifold", "--grid", "2,2")
    assert code == cli.EXIT_OBSTRUCTION


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "limfrob", "spectrum", "--weights", "2,2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "OVERALL PASS" in proc.stdout


def test_encoders():
    assert enc_rational(3) == "3/1"
    assert enc_rational(dec_rational("-1/2")) == "-1/2"
    assert enc_laurent(laurent(2, 1, -1)) == [{"coeff": "2/1", "x_exp": 1, "theta_exp": -1}]
    assert enc_laurent(0) == []


def test_schema_rejects_float_rationals():
    doc = pipeline.run("spectrum", (2, 2)).to_dict()
    doc["sections"]["spectrum"]["data"]["s"][0] = 0.0
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(doc, SCHEMA)


def test_grid_contents():
    grid = pipeline.weight_grid(5, 6)
    assert len(grid) == 461
    assert all(list(w) == sorted(w) for w in grid)
