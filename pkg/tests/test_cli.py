import json
import os
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from hfkn.cli import format_degrees, parse_n_range, run

GOLDEN = Path(__file__).parent / "golden"
KNOTS = ["unknot", "trefoil", "4_1", "T3,4", "T2,5"]


def _run(argv, capsys):
    code = run(argv)
    out, err = capsys.readouterr()
    return code, out, err


def _golden_name(knot, fmt):
    return f"hfkn_{knot.replace(',', '_')}.{fmt}"


def test_parse_n_range():
    assert parse_n_range("3") == [3]
    assert parse_n_range("2..4") == [2, 3, 4]
    assert parse_n_range("1,3") == [1, 3]


def test_format_degrees():
    assert format_degrees({Fraction(-2): 1, 0: 1, 2: 1}) == "q^-2 + 1 + q^2"
    assert format_degrees({Fraction(1, 2): 2, Fraction(-3, 2): 1}) == "q^(-3/2) + 2q^(1/2)"
    assert format_degrees({}) == "0"


def test_unknot_example(capsys):
    code, out, _ = _run(["hfkn", "--knot", "unknot", "--n", "3"], capsys)
    assert code == 0
    assert "Q[U]/(U^3)" in out and "Poincare: q^-2 + 1 + q^2" in out
    # the subcommand name may be left out
    assert _run(["--knot", "unknot", "--n", "3"], capsys)[1] == out


def test_staircase_example(capsys):
    code, out, _ = _run(["hfkn", "--alexander-exponents", "1,0,-1", "--n", "2"], capsys)
    assert code == 0 and "total 4" in out


def test_sscheck_example(capsys):
    code, out, _ = _run(["sscheck", "--knot", "T3,4", "--n", "2"], capsys)
    assert code == 0 and "compatible" in out and "incompatible" not in out


def test_sscheck_polynomials(capsys):
    code, out, _ = _run(["sscheck", "--source", "q^3 + 4*q^5 + 3*q^7",
                         "--target", "q^3 + 3*q^5 + 2*q^7", "--step", "2", "--format", "json"], capsys)
    data = json.loads(out)
    assert code == 0 and data["compatible"] and data["witness"] == "q^5"
    code, out, _ = _run(["sscheck", "--source", "1", "--target", "q", "--step", "1", "--shift", "0"], capsys)
    assert code == 0 and out.startswith("incompatible")


def test_homfly(capsys):
    code, out, _ = _run(["homfly", "--braid", "strands=1 word=", "--sln", "3"], capsys)
    assert code == 0 and "(a - a^-1)/(q - q^-1)" in out and "sl_3: q^-2 + 1 + q^2" in out
    code, out, _ = _run(["homfly", "--knot", "trefoil", "--reduced", "--format", "json"], capsys)
    assert json.loads(out)["homfly"] == "a^-2*q^2 + a^-2*q^-2 - a^-4"


def test_kr(capsys):
    code, out, _ = _run(["kr", "--braid", "strands=2 word=1,1,1", "--sln", "2", "--cutoff", "40"], capsys)
    assert code == 0 and "total 4" in out and "truncated" not in out
    code, out, _ = _run(["kr", "--knot", "unknot", "--reduced", "--format", "json"], capsys)
    assert json.loads(out)["total"] == 1


def test_validate(capsys, tmp_path):
    assert _run(["validate", "--knot", "trefoil"], capsys)[0] == 0
    assert _run(["validate", "--braid", "strands=2 word=1,-1,1", "--n", "1..2"], capsys)[0] == 0
    from hfkn.hfk import builtin
    d = builtin("trefoil").to_dict()
    d["differential"] = [[s, t, p.replace("V1", "V1^2")] for s, t, p in d["differential"]]
    f = tmp_path / "bad.json"
    f.write_text(json.dumps(d))
    code, out, _ = _run(["validate", "--file", str(f)], capsys)
    assert code == 1 and out.startswith("INVALID")


def test_file_input_matches_builtin(capsys, tmp_path):
    from hfkn.hfk import builtin
    f = tmp_path / "t.json"
    f.write_text(builtin("trefoil").to_json())
    a = _run(["hfkn", "--file", str(f), "--n", "1..3"], capsys)[1]
    b = _run(["hfkn", "--knot", "trefoil", "--n", "1..3"], capsys)[1]
    assert a == b


def test_output_file(capsys, tmp_path):
    f = tmp_path / "out.json"
    assert _run(["hfkn", "--knot", "trefoil", "--n", "2", "--format", "json", "--output", str(f)], capsys)[1] == ""
    assert json.loads(f.read_text())[0]["total"] == 4


@pytest.mark.parametrize("argv", [
    ["hfkn", "--knot", "no-such-knot"],
    ["hfkn", "--knot", "unknot", "--alexander-exponents", "0"],
    ["hfkn", "--knot", "unknot", "--n", "0"],
    ["hfkn", "--alexander-exponents", "1,x"],
    ["kr", "--knot", "no-such-braid"],
    ["sscheck", "--source", "q"],
    ["sscheck", "--source", "q^", "--target", "q", "--step", "1"],
    ["bogus"],
    [],
])
def test_usage_errors(argv, capsys):
    code, _, err = _run(argv, capsys)
    assert code == 2 and err


def test_invalid_data_exit_code(capsys):
    # well-formed flags with invalid mathematical data: a computation error
    code, _, err = _run(["hfkn", "--alexander-exponents", "1,0", "--n", "2"], capsys)
    assert code == 1 and err


@pytest.mark.parametrize("knot", KNOTS)
@pytest.mark.parametrize("fmt", ["text", "json"])
def test_golden(knot, fmt, capsys):
    argv = ["hfkn", "--knot", knot, "--n", "1..4", "--format", fmt]
    code, out, _ = _run(argv, capsys)
    assert code == 0
    assert _run(argv, capsys)[1] == out
    path = GOLDEN / _golden_name(knot, fmt)
    if os.environ.get("HFKN_REGEN_GOLDEN"):
        path.write_text(out)
    assert out == path.read_text()


def test_golden_sscheck(capsys):
    argv = ["sscheck", "--knot", "T2,3", "--n", "1..4"]
    out = _run(argv, capsys)[1]
    path = GOLDEN / "sscheck_T2_3.txt"
    if os.environ.get("HFKN_REGEN_GOLDEN"):
        path.write_text(out)
    assert out == path.read_text()


def test_console_script_subprocess():
    r = subprocess.run([sys.executable, "-m", "hfkn.cli", "hfkn", "--knot", "unknot", "--n", "2"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0 and "Q[U]/(U^2)" in r.stdout
    r = subprocess.run([sys.executable, "-m", "hfkn.cli", "hfkn", "--knot", "nope"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 2 and "unknown knot" in r.stderr
