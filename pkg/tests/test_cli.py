import json
from fractions import Fraction

import pytest

from polychain import Chain, CoefficientGroup
from polychain.cli import EXIT_INPUT, EXIT_OK, EXIT_VERIFY, run

ZZ = CoefficientGroup.integers()


def invoke(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, out


@pytest.fixture
def diagonal(tmp_path):
    path = tmp_path / "diag.json"
    path.write_text(json.dumps(Chain(2, 1, ZZ, [(((0, 0), (1, 1)), 1)]).to_json()))
    return str(path)


def test_tflatnorm_four_corner(capsys):
    code, out = invoke(capsys, "tflatnorm", "--example", "four-corner", "--json")
    assert code == EXIT_OK
    assert json.loads(out)["results"]["value"] == "1"


def test_expect_mismatch_exits_two(capsys):
    code, _ = invoke(capsys, "tflatnorm", "--example", "four-corner:1/2", "--expect", "1", "--json")
    assert code == EXIT_VERIFY


def test_reports_are_deterministic(capsys, diagonal):
    first = invoke(capsys, "mass", diagonal, "--json")
    second = invoke(capsys, "mass", diagonal, "--json")
    assert first == second
    report = json.loads(first[1])
    assert set(report) == {"command", "inputs_hash", "results", "verdicts", "exit_code"}


def test_split_test_on_diagonal(capsys, diagonal):
    code, out = invoke(capsys, "split-test", diagonal, "--k1", "1", "--k2", "0", "--n1", "1", "--json")
    assert code == EXIT_OK
    assert "NotSplit" in out


def test_boundary_round_trip(capsys, diagonal):
    code, out = invoke(capsys, "boundary", diagonal, "--json")
    assert code == EXIT_OK
    b = Chain.from_json(json.loads(out)["results"]["chain"])
    assert b == Chain.point((1, 1)) - Chain.point((0, 0))


def test_slice_uses_one_based_axes(capsys, diagonal):
    code, out = invoke(capsys, "slice", diagonal, "--gamma", "1", "--at", "1/2", "--json")
    assert code == EXIT_OK
    sl = Chain.from_json(json.loads(out)["results"]["chain"])
    assert sl == Chain.point((0, Fraction(1, 2)))


def test_bad_inputs_exit_one(capsys, tmp_path, diagonal):
    assert invoke(capsys, "mass", str(tmp_path / "missing.json"))[0] == EXIT_INPUT
    assert invoke(capsys, "flatnorm", diagonal, "--complex", "0,0;1;2,2")[0] == EXIT_INPUT
    assert invoke(capsys, "slice", diagonal, "--gamma", "1", "--at", "1")[0] == EXIT_INPUT
    assert invoke(capsys, "no-such-command")[0] == EXIT_INPUT


def test_lab_commands(capsys):
    code, out = invoke(capsys, "lab", "staircase", "--level", "3", "--boundary-growth", "--json")
    assert code == EXIT_OK
    code, out = invoke(capsys, "lab", "counterexample", "--default", "rational", "--verify", "--json")
    assert code == EXIT_OK and json.loads(out)["results"]["report"]["ok"]
    code, out = invoke(capsys, "lab", "ip-search", "--n", "3", "--terms", "3", "--bound", "1", "--verify", "--json")
    assert code == EXIT_OK and json.loads(out)["results"]["min_found"] == 8


def test_counterexample_from_spec_file(capsys, tmp_path):
    from polychain.lab import default_theta_spec

    path = tmp_path / "spec.json"
    path.write_text(json.dumps(default_theta_spec("sqrt2").to_json()))
    code, out = invoke(capsys, "lab", "counterexample", "--spec", str(path), "--verify", "--json")
    assert code == EXIT_OK
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"paths": [[["0", "0"], ["1", "0"]]] * 3}))
    assert invoke(capsys, "lab", "counterexample", "--spec", str(bad))[0] == EXIT_INPUT


def test_reproduce_all_single_criterion(capsys):
    code, out = invoke(capsys, "reproduce-all", "--only", "1")
    assert code == EXIT_OK
    assert "[PASS] criterion 1" in out
