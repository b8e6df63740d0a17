import io
import json
import subprocess
import sys

import pytest

from planebranch.cli import EXIT_CHECK, EXIT_INPUT, EXIT_OK, dump_json, main

CUSP = {"m": 2, "g": [[3, "1"]]}
B467 = {"m": 4, "g": [[6, "1"], [7, "1"]]}
SMOOTH = {"m": 1, "g": [[1, "1"]]}


@pytest.fixture
def curve_file(tmp_path):
    def make(doc, name="curve.json"):
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return str(path)
    return make


def run(capsys, argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, argv, **kw):
    code, out, err = run(capsys, argv + ["--json"], **kw)
    return code, json.loads(out), out


def test_invariants_cusp(capsys, curve_file):
    code, obj, _ = run_json(capsys, ["invariants", curve_file(CUSP)])
    assert code == EXIT_OK
    inv = obj["invariants"]
    assert (inv["bs"], inv["mu"], inv["ord_pw"], inv["kappa"], inv["Q"]) == (2, 2, 3, "3/2", "2")
    assert inv["oracle_values"] == {"closed": 3, "kstar": 3, "product": 3, "weierstrass": 3}
    assert obj["characteristic"]["beta"] == [3]


def test_invariants_text_and_stdin(capsys, monkeypatch):
    code, out, _ = run(capsys, ["invariants"], stdin=json.dumps(SMOOTH), monkeypatch=monkeypatch)
    assert code == EXIT_OK
    assert "bs              1" in out


def test_oracle_selection(capsys, curve_file):
    code, obj, _ = run_json(capsys, ["invariants", curve_file(B467), "--oracles", "kstar,closed"])
    assert code == EXIT_OK
    assert obj["invariants"]["oracle_values"] == {"closed": 19, "kstar": 19}
    with pytest.raises(SystemExit):
        main(["invariants", curve_file(B467), "--oracles", "nope"])


@pytest.mark.parametrize("doc, rule", [
    ({"m": 2, "g": [[4, "1"]]}, "NotPrimitive"),
    ({"m": 3, "g": [[2, "1"]]}, "ExponentBelowMultiplicity"),
    ({"m": 2, "g": [[3, "0"]]}, "ZeroCoefficient"),
    ({"m": 2, "g": [[3, "1"], [3, "2"]]}, "DuplicateExponent"),
    ({"m": 2, "g": [[3, 1.5]]}, "MalformedInput"),
    ([1, 2], "MalformedInput"),
])
def test_validation_errors(capsys, curve_file, doc, rule):
    code, obj, _ = run_json(capsys, ["invariants", curve_file(doc)])
    assert code == EXIT_INPUT
    assert obj["error"] == rule


def test_error_text_goes_to_stderr(capsys, curve_file):
    code, out, err = run(capsys, ["invariants", curve_file({"m": 2, "g": [[4, "1"]]})])
    assert code == EXIT_INPUT and out == "" and "NotPrimitive" in err


def test_missing_file(capsys, tmp_path):
    code, obj, _ = run_json(capsys, ["invariants", str(tmp_path / "absent.json")])
    assert code == EXIT_INPUT and obj["error"] == "MalformedInput"


@pytest.mark.parametrize("doc, gens, conductor", [(CUSP, [2, 3], 2), (B467, [4, 6, 13], 16),
                                                  (SMOOTH, [1], 0)])
def test_semigroup(capsys, curve_file, doc, gens, conductor):
    code, obj, _ = run_json(capsys, ["semigroup", curve_file(doc)])
    assert code == EXIT_OK
    assert obj["semigroup"]["generators"] == gens
    assert obj["semigroup"]["conductor"] == conductor == obj["mu"]


@pytest.mark.parametrize("num, den, verdict", [("w", "z", "WeakOnly"), ("w^2", "z", "Strong"),
                                               ("z", "w", "NotWeak")])
def test_member(capsys, curve_file, num, den, verdict):
    code, obj, _ = run_json(capsys, ["member", curve_file(CUSP), num, den])
    assert code == EXIT_OK
    assert obj["classification"] == verdict


def test_member_ledger(capsys, curve_file):
    _, obj, _ = run_json(capsys, ["member", curve_file(CUSP), "w", "z"])
    assert (obj["ord_num"], obj["ord_den"], obj["ord_quotient"]) == (3, 2, 1)


def test_member_parse_error(capsys, curve_file):
    code, obj, _ = run_json(capsys, ["member", curve_file(CUSP), "w +", "z"])
    assert code == EXIT_INPUT and obj["error"] == "ParseError"


def test_member_zero_denominator(capsys, curve_file):
    code, _, _ = run_json(capsys, ["member", curve_file(CUSP), "z", "w^2 - z^3"])
    assert code == EXIT_INPUT


def test_weierstrass(capsys, curve_file):
    code, obj, _ = run_json(capsys, ["weierstrass", curve_file(CUSP)])
    assert code == EXIT_OK
    assert obj["P"] == "w^2 - z^3"
    assert obj["weierstrass"] == {"m": 2, "b": [[], [[3, "-1"]]]}
    code, out, _ = run(capsys, ["weierstrass", curve_file(B467)])
    assert out.strip() == "w^4 - 2*w^2*z^3 - 4*w*z^5 + z^6 - z^7"


def test_verify_single(capsys, curve_file):
    code, obj, _ = run_json(capsys, ["verify", curve_file(CUSP)])
    assert code == EXIT_OK and obj["passed"]


def test_verify_tampered_fixture(capsys, curve_file):
    doc = dict(CUSP, expected={"ord_pw": 4})
    code, obj, _ = run_json(capsys, ["verify", curve_file(doc)])
    assert code == EXIT_CHECK
    assert obj["error"] == "oracle agreement"
    code, out, _ = run(capsys, ["verify", curve_file(doc)])
    assert "first failing law: oracle agreement" in out


def test_verify_wrong_fixture_value(capsys, curve_file):
    doc = dict(B467, expected={"semigroup": [4, 6, 11]})
    code, obj, _ = run_json(capsys, ["verify", curve_file(doc)])
    assert code == EXIT_CHECK and obj["error"] == "fixture values"


@pytest.mark.parametrize("argv", [
    ["invariants"], ["semigroup"], ["weierstrass"], ["member", "-", "w", "z"], ["verify"],
])
def test_json_round_trip_is_byte_identical(capsys, monkeypatch, argv):
    code, obj, raw = run_json(capsys, argv, stdin=json.dumps(B467), monkeypatch=monkeypatch)
    assert code == EXIT_OK
    assert dump_json(json.loads(raw)) == raw


def test_rationals_never_floats(capsys, curve_file):
    _, _, raw = run_json(capsys, ["invariants", curve_file(B467)])

    def walk(x):
        if isinstance(x, float):
            raise AssertionError(x)
        for v in x.values() if isinstance(x, dict) else x if isinstance(x, list) else ():
            walk(v)
    walk(json.loads(raw))


def test_console_script_entry_point(curve_file):
    proc = subprocess.run([sys.executable, "-m", "planebranch.cli", "invariants", curve_file(CUSP)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "bs              2" in proc.stdout


def test_verify_corpus(capsys):
    code, obj, _ = run_json(capsys, ["verify", "--corpus"])
    assert code == EXIT_OK and obj["passed"] and len(obj["curves"]) == 25
