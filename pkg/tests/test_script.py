import json

import pytest

from mucalc.report import EXIT_FAIL, EXIT_OK, EXIT_USAGE, RunReport
from mucalc.script import BUNDLED, Options, check_script, run_script, run_text


@pytest.mark.parametrize("name", BUNDLED)
def test_bundled_scripts_pass(name):
    report = run_script(name, Options(samples=10))
    failed = [r.inputs for r in report.records if not r.passed]
    assert report.exit_code == EXIT_OK and not failed, failed


def test_failing_assertion_exits_one():
    report = run_text("assert forall x:P, y:P. x == y;")
    assert report.exit_code == EXIT_FAIL
    assert report.records[0].verdict == "distinct"


def test_assertion_kinds():
    text = """
    const k : P -> P;
    assert check \\x:P. x : P -> P;
    assert focal \\x:P. x;
    assert nonfocal k;
    assert forall x:P. oracle pi1 <x, x> == x;
    assert forall x:P. (\\y:P. y) x == x;
    """
    report = run_text(text, Options(samples=8))
    assert [r.kind for r in report.records] == [
        "check", "focal", "nonfocal", "oracle-equal", "equal"]
    assert report.exit_code == EXIT_OK


def test_type_error_exits_two_with_line():
    report = run_text("const c : P;\n\nassert c == unit;")
    assert report.exit_code == EXIT_USAGE
    assert "type error" in report.error and report.error.startswith("3:")


def test_parse_error_exits_two():
    report = run_text("assert \\x. x == x;")
    assert report.exit_code == EXIT_USAGE and "parse error" in report.error


def test_duplicate_declaration():
    report = check_script("const c : P; const c : Q;")
    assert report.exit_code == EXIT_USAGE and "duplicate" in report.error


def test_check_reports_types():
    report = check_script("def i = \\x:P. x;")
    assert report.records[0].reason == "P -> P"


def test_empty_script():
    report = run_text("-- nothing here\n")
    assert report.exit_code == EXIT_OK and report.summary.total == 0


def test_missing_file():
    assert run_script("/nonexistent.mu").exit_code == EXIT_USAGE


def test_report_json_roundtrip():
    report = run_text("assert forall x:P. pi1 <x, x> == x;")
    data = json.loads(report.to_json())
    assert RunReport.model_validate(data) == report
    assert json.loads(report.to_json(timing=False))["records"][0]["wall_time"] == 0.0


def test_runs_are_deterministic():
    a = run_script("axioms.mu", Options(seed=3, samples=8))
    b = run_script("axioms.mu", Options(seed=3, samples=8))
    assert a.to_json(timing=False) == b.to_json(timing=False)
