import json
import os
from fractions import Fraction
from pathlib import Path

import pytest

from dioph.cli import main

GOLDEN = Path(__file__).parent / "golden"

GOLDEN_CASES = {
    "bounds_lambda2n_n2.json": ["bounds", "lambda2n", "--n", "2", "--format", "json"],
    "dim_partition_n11.json": ["dim", "partition", "--N", "11", "--format", "json"],
    "estimate_cf_phi10.json": ["estimate", "cf", "--number", "phi", "--terms", "10", "--format", "json"],
    "catalog_list.json": ["catalog", "list", "--format", "json"],
}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_golden(capsys, name):
    code, out, _ = run(capsys, *GOLDEN_CASES[name])
    assert code == 0
    path = GOLDEN / name
    if os.environ.get("DIOPH_UPDATE_GOLDEN"):
        path.write_text(out, encoding="utf-8")
    assert json.loads(out) == json.loads(path.read_text(encoding="utf-8"))


def test_lambda2n_n1_text(capsys):
    code, out, _ = run(capsys, "bounds", "lambda2n", "--n", "1")
    assert code == 0 and "0.61803398" in out


def test_conditional_n10(capsys):
    code, out, _ = run(capsys, "bounds", "lambda2n", "--n", "10", "--mode", "conditional", "--format", "json")
    data = json.loads(out)
    lo, hi = (float(v) for v in data["value"]["decimal"])
    assert 0.0928 <= lo <= hi < 0.0929


def test_wk_d_and_transfer(capsys):
    _, out, _ = run(capsys, "bounds", "wk", "--what", "d")
    assert "14.944" in out
    code, out, _ = run(capsys, "bounds", "transfer", "--variant", "reciprocal", "--n", "2", "--w", "2.5")
    assert code == 0 and "lambda_6" in out and "1/2" in out


def test_alpha(capsys):
    code, out, _ = run(capsys, "bounds", "alpha", "--format", "json")
    assert code == 0 and "0.7968" in out


def test_partition_first_endpoint(capsys):
    _, out, _ = run(capsys, "dim", "partition", "--N", "11")
    assert out.startswith("I_1 = [13/33, inf)")


def test_curve_n2_matches_exact_curve(capsys):
    _, out, _ = run(capsys, "dim", "curve", "--N", "2", "--from", "1/2", "--to", "1", "--points", "11",
                    "--format", "json")
    rows = json.loads(out)["rows"]
    for r in rows:
        lam = float(Fraction(r["lambda"]))
        assert abs(float(r["lower_bdv"]) - (2 - lam) / (1 + lam)) < 1e-11
        assert r["lower_envelope"] == r["upper_envelope"]


def test_curve_steps_n11(capsys):
    _, out, _ = run(capsys, "dim", "curve", "--N", "11", "--from", "1/11", "--to", "1", "--points", "400",
                    "--format", "json")
    rows = json.loads(out)["rows"]
    seen = sorted({r["upper_reduction"] for r in rows if r["upper_reduction"]})
    assert {"0.333333333333", "0.571428571429"} <= set(seen)
    assert any(r["upper_split"] == "0.857142857143" for r in rows)


def test_svg_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    for path in (a, b):
        assert run(capsys, "dim", "curve", "--N", "11", "--points", "60", "--svg", str(path))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    text = a.read_text()
    assert text.startswith("<svg") and "lower partition" in text and "upper reduction" in text


def test_estimate_lambda_json(capsys):
    code, out, _ = run(capsys, "estimate", "lambda", "--number", "sqrt2", "--n", "1", "--xmax", "1e5",
                       "--format", "json")
    data = json.loads(out)
    lo, hi = (float(v) for v in data["limsup_estimate"])
    assert code == 0 and 0.9 <= lo <= hi <= 1.1
    assert data["label"] == "finite-X heuristic"


def test_threads_do_not_change_output(capsys):
    argv = ["estimate", "lambda", "--number", "random42", "--n", "2", "--xmax", "3e4", "--format", "json"]
    _, one, _ = run(capsys, *argv, "--threads", "1")
    _, four, _ = run(capsys, *argv, "--threads", "4")
    assert one == four


def test_env_threads(capsys, monkeypatch):
    monkeypatch.setenv("DIOPH_THREADS", "3")
    code, out, _ = run(capsys, "estimate", "poly", "--number", "sqrt2", "--n", "2", "--X", "1")
    assert code == 0 and "P=1,-1,-1" in out


def test_estimate_errors(capsys):
    code, _, err = run(capsys, "estimate", "poly", "--number", "sqrt2", "--n", "4", "--X", "3")
    assert code == 2 and "error:" in err and "hint:" in err
    code, _, err = run(capsys, "estimate", "lambda", "--number", "third", "--xmax", "100")
    assert code == 2 and "rational input" in err
    code, _, err = run(capsys, "estimate", "cf", "--number", "nonesuch")
    assert code == 2


def test_verify_commands(capsys):
    assert run(capsys, "verify", "prefixes", "--seeds", "50")[0] == 0
    assert run(capsys, "verify", "identities", "--number", "sqrt2", "--n", "1")[0] == 0
    assert run(capsys, "verify", "envelopes", "--N", "2..6", "--points", "50")[0] == 0


def test_verify_corrupted_file(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"prefixes": [
        {"role": "w", "values": ["1", "2", "3"]},
        {"role": "lambda", "values": ["1", "1/3", "1/2"]}]}))
    code, out, _ = run(capsys, "verify", "prefixes", "--file", str(path))
    assert code == 1 and "lambda monotone" in out


def test_config_file_and_out(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\nformat = json\nthreads = 2\n")
    target = tmp_path / "out.json"
    code, out, _ = run(capsys, "--config", str(cfg), "catalog", "show", "sqrt2", "--out", str(target))
    assert code == 0 and out == ""
    raw = target.read_bytes()
    assert b"\r\n" not in raw
    assert json.loads(raw)["name"] == "sqrt2"
    cfg.write_text("colour = red\n")
    assert run(capsys, "--config", str(cfg), "catalog", "list")[0] == 2
