import json
import subprocess
import sys

import pytest

from mhslab.cli import main, parse_basis, parse_bound, parse_range, UsageError


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parsers():
    assert parse_range("11..97") == (11, 97)
    assert parse_range("13") == (13, 13)
    with pytest.raises(UsageError):
        parse_range("9..3")
    assert parse_bound("1e12") == 10**12
    assert parse_bound("250") == 250
    with pytest.raises(UsageError):
        parse_bound("1e-3")
    assert parse_basis("p-r:B_{p-7}") == (0, ((7,),))
    assert parse_basis("B_{p-3}^3+B_{p-9}") == (None, ((3, 3, 3), (9,)))
    assert parse_basis("p-(r-1):B_{p-5}*B_{p-3}") == (-1, ((3, 5),))


def test_verify_sixvar(capsys, tmp_path):
    out_path = tmp_path / "r.json"
    code, _, err = run(capsys, "verify", "--theorems", "sixvar", "--primes", "11..97",
                       "--r", "2", "--out", str(out_path))
    assert code == 0
    doc = json.loads(out_path.read_text())
    assert doc["totals"] == {"pass": 21, "fail": 0, "skipped": 0}


def test_verify_unknown_theorem(capsys):
    assert run(capsys, "verify", "--theorems", "nosuch")[0] == 2


def test_verify_empty_range(capsys):
    code, out, _ = run(capsys, "verify", "--theorems", "zhao3var", "--primes", "32..36")
    assert code == 0 and json.loads(out)["reports"] == []


def test_verify_csv_and_timings(capsys):
    code, out, _ = run(capsys, "verify", "--theorems", "zhao3var", "--primes", "11..13",
                       "--format", "csv", "--timings")
    rows = out.splitlines()
    assert code == 0 and len(rows) == 3 and rows[1].split(",")[-1] != ""


def test_verify_limit_exceeded(capsys):
    assert run(capsys, "verify", "--theorems", "sixvar", "--primes", "11", "--r", "7")[0] == 3


def test_bad_flag_is_usage_error(capsys):
    assert run(capsys, "verify", "--bogus")[0] == 2
    assert run(capsys, "verify", "--jobs", "0")[0] == 2


def test_jobs_env(capsys, monkeypatch):
    monkeypatch.setenv("MHS_LAB_JOBS", "x")
    assert run(capsys, "verify", "--theorems", "zhao3var")[0] == 2


def test_fit_thm1(capsys):
    code, out, _ = run(capsys, "fit", "--n", "6", "--primes", "11..199", "--r", "2", "--expect-fitted")
    doc = json.loads(out)
    assert code == 0 and doc["coefficients"] == [{"num": -20, "den": 3}]


def test_fit_zhao_shape(capsys):
    code, out, _ = run(capsys, "fit", "--n", "6", "--basis", "p-r:B_{p-7}", "--modexp", "r+1",
                       "--bound", "1e12")
    assert code == 0 and json.loads(out)["status"] == "Refuted-at-bound"
    code, _, _ = run(capsys, "fit", "--n", "6", "--basis", "p-r:B_{p-7}", "--modexp", "r+1",
                     "--expect-fitted")
    assert code == 1


def test_fit_empty_basis(capsys):
    code, out, _ = run(capsys, "fit", "--n", "4")
    doc = json.loads(out)
    assert code == 0 and doc["status"] == "Inconclusive"
    assert "no odd partitions" in doc["notes"][0]


def test_fit_inconsistent_modexp(capsys):
    assert run(capsys, "fit", "--n", "6", "--basis", "p-r:B_{p-7}", "--modexp", "r")[0] == 2


def test_bernoulli(capsys):
    code, out, _ = run(capsys, "bernoulli", "--p", "11")
    assert code == 0 and "B_8 ≡ 4 (mod 11)" in out
    code, out, _ = run(capsys, "bernoulli", "--exact", "2")
    assert out.strip() == "1/6"
    assert run(capsys, "bernoulli", "--p", "4")[0] == 2


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "mhslab", "bernoulli", "--exact", "12"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "-691/2730"
