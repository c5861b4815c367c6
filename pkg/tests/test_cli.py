import json

import pytest

from mucalc.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_equiv_exit_codes(capsys):
    assert run(capsys, "equiv", "-e", "pi1 <x, y>", "-e", "x")[0] == 0
    assert run(capsys, "equiv", "--var", "x:P", "--var", "y:P", "-e", "x", "-e", "y")[0] == 1


def test_equiv_needs_two_terms(capsys):
    code, out = run(capsys, "equiv", "-e", "x")
    assert code == 2 and "exactly two" in out


def test_type_mismatch_is_usage_error(capsys):
    code, out = run(capsys, "equiv", "--var", "x:P", "--var", "y:Q", "-e", "x", "-e", "y")
    assert code == 2 and "type error" in out


def test_normalize(capsys):
    code, out = run(capsys, "normalize", "--var", "y:P", "-e", "(\\x:P. x) y", "--trace")
    assert code == 0 and "=> y" in out and "beta" in out


def test_json_flag_anywhere(capsys):
    for argv in (["--json", "normalize", "-e", "pi2 <x, y>"],
                 ["normalize", "-e", "pi2 <x, y>", "--json"]):
        code, out = run(capsys, *argv)
        assert code == 0 and json.loads(out)["records"][0]["output"] == "y"


def test_cps_type(capsys):
    assert run(capsys, "cps", "--type", "Top")[1].strip() == "Empty"
    code, out = run(capsys, "cps", "--type", "Streams", "--decls", "nat.mu", "--symbols")
    assert code == 0 and out.strip() == "μX.⊤+X"


def test_focal(capsys):
    assert run(capsys, "focal", "-e", "\\x:P. x")[0] == 0
    code, out = run(capsys, "focal", "--decls", "nat.mu", "-e", "k", "--samples", "5")
    assert code == 1 and "nonfocal" in out


def test_scripts(capsys, tmp_path):
    assert run(capsys, "run", "lists.mu")[0] == 0
    assert run(capsys, "check", "trees.mu")[0] == 0
    bad = tmp_path / "bad.mu"
    bad.write_text("assert forall x:P, y:P. x == y;")
    assert run(capsys, "run", str(bad))[0] == 1
    bad.write_text("assert x ==;")
    assert run(capsys, "run", str(bad))[0] == 2


def test_demos(capsys):
    code, out = run(capsys, "demo", "nat", "--max", "3")
    assert code == 0 and "3/3 passed" in out
    assert run(capsys, "demo", "list", "--len", "2", "--elem", "b")[0] == 0
    assert run(capsys, "demo", "tree", "--depth", "2")[0] == 0


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["run", "/no/such/file.mu"],
                                  ["normalize", "-e", "\\x. x"]])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2
