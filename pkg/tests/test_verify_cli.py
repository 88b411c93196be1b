import json
from math import comb

import pytest

from prolong.cli import main, parse_k_range, UsageError
from prolong.lie_core import GradedAlgebra
from prolong.models import make_m
from prolong.verify import (
    FibTable,
    check_depth,
    check_fibonacci,
    cross_check,
    expected_nu,
    expected_total,
    fib,
)


def test_fib_values():
    assert [fib(n) for n in range(1, 11)] == [1, 1, 2, 3, 5, 8, 13, 21, 34, 55]
    with pytest.raises(ValueError):
        fib(0)


@pytest.mark.parametrize("k", range(2, 31))
def test_fib_composition_identity(k):
    assert FibTable.compositions(k) == FibTable()[k + 3]


def test_expected_formulas():
    assert [expected_total(k) for k in (3, 4, 5, 6)] == [17, 23, 32, 46]
    assert [expected_nu(k) for k in (3, 4, 5, 6, 7)] == [2, 4, 7, 10, 14]


@pytest.mark.parametrize("k", [3, 4, 6])
def test_check_fibonacci(k):
    expected, computed, ok = check_fibonacci(k)
    assert ok and expected == computed == fib(k + 3) + k + 6


def test_check_depth():
    assert check_depth(3) == (2, 2, True)
    assert check_depth(4) == (4, 4, True)
    with pytest.raises(ValueError):
        check_depth(2)
    with pytest.raises(ValueError):
        check_fibonacci(2)


@pytest.mark.parametrize("k,total", [(3, 17), (4, 23), (5, 32)])
def test_cross_check(k, total):
    rep = cross_check(k)
    assert rep.passed
    assert rep.total_dim == total
    assert rep.dims == rep.oracle_dims


def test_report_json_is_deterministic():
    a = json.dumps(cross_check(3).to_dict(), sort_keys=True)
    b = json.dumps(cross_check(3).to_dict(), sort_keys=True)
    assert a == b


def test_parse_k_range():
    assert parse_k_range("3..6") == [3, 4, 5, 6]
    assert parse_k_range("5") == [5]
    for bad in ("x", "6..3", "3..", ""):
        with pytest.raises(UsageError):
            parse_k_range(bad)


# -- CLI -----------------------------------------------------------------------


def test_cli_model_round_trip(tmp_path):
    out = tmp_path / "algebra.json"
    assert main(["model", "--family", "m", "--k", "4", "--emit", str(out)]) == 0
    text = out.read_text()
    assert GradedAlgebra.from_json(text) == make_m(4)
    assert GradedAlgebra.from_json(text).to_json() == text


@pytest.mark.parametrize("family", ["m", "gprime", "heisenberg", "s"])
def test_cli_model_families(family, capsys):
    assert main(["model", "--family", family, "--k", "3"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["basis"]


def test_cli_model_bad_k(capsys):
    assert main(["model", "--family", "s", "--k", "2"]) == 2
    assert "k must be" in capsys.readouterr().err


def test_cli_tanaka_json(tmp_path, capsys):
    path = tmp_path / "m3.json"
    path.write_text(make_m(3).to_json())
    assert main(["tanaka", "--input", str(path), "--max-degree", "64", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["nu"] == 2 and data["terminated"] == "vanished"
    assert sum(data["dims"].values()) == 17
    assert len(data["algebra"]["basis"]) == 17


def test_cli_tanaka_csv_and_cap(tmp_path, capsys):
    path = tmp_path / "m4.json"
    path.write_text(make_m(4).to_json())
    assert main(["tanaka", "--input", str(path), "--format", "csv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "degree,dim" and lines[-1] == "4,2"
    assert main(["tanaka", "--input", str(path), "--max-degree", "2"]) == 1


def test_cli_tanaka_env_cap(tmp_path, monkeypatch):
    path = tmp_path / "m4.json"
    path.write_text(make_m(4).to_json())
    monkeypatch.setenv("PROLONG_MAX_DEGREE", "1")
    assert main(["tanaka", "--input", str(path)]) == 1


def test_cli_input_errors(tmp_path, capsys):
    assert main(["tanaka", "--input", str(tmp_path / "missing.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["tanaka", "--input", str(bad)]) == 2
    bad.write_text(json.dumps({"basis": [{"name": "A", "degree": -1}, {"name": "B", "degree": -1}, {"name": "C", "degree": -3}],
                               "brackets": [{"left": "A", "right": "B", "value": [{"name": "C", "coeff": "1"}]}]}))
    assert main(["tanaka", "--input", str(bad)]) == 2
    assert "grading" in capsys.readouterr().err


def test_cli_usage_errors():
    assert main([]) == 2
    assert main(["bogus"]) == 2
    assert main(["verify", "--k", "2..3"]) == 2
    assert main(["verify", "--k", "7"]) == 2


def test_cli_verify(capsys):
    assert main(["verify", "--k", "3..5", "--jobs", "2"]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert [line.split()[0] for line in out] == ["k=3", "k=4", "k=5"]
    assert all("PASS" in line for line in out)


def test_cli_verify_json_and_oracle(capsys):
    assert main(["verify", "--k", "4", "--method", "oracle", "--format", "json"]) == 0
    (rep,) = json.loads(capsys.readouterr().out)
    assert rep["pass"] and rep["total_dim"] == 23 and rep["method"] == "oracle"


def test_cli_verify_large_warns(capsys):
    assert main(["verify", "--k", "7", "--large", "--format", "csv"]) == 0
    cap = capsys.readouterr()
    assert "warning" in cap.err
    assert cap.out.splitlines()[0] == "k,method,check,expected,computed,pass"


def test_cli_cross_check(capsys):
    assert main(["cross-check", "--k", "3..4"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 2


def test_cli_oracle_formats(capsys):
    assert main(["oracle", "--k", "5", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["total_dim"] == 32 and data["dims"]["1"] == comb(4, 3)
    assert main(["oracle", "--k", "4", "--format", "poly"]) == 0
    out = capsys.readouterr().out
    assert "# component 1 (dim 1)" in out
    assert main(["oracle", "--k", "4", "--format", "json", "--polynomials"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert set(data["components"]) == {"0", "1", "2"}
