import json
import math

import pytest

from torsionlab.cli import main, parse_beta
from torsionlab.errors import SchemaError
from torsionlab.verify import run_suites


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_parse_beta_grammar():
    assert parse_beta("1", 3) == (1.0, 1.0, 1.0)
    assert parse_beta("k", 3) == (0.0, 1.0, 2.0)
    assert parse_beta("lin:2,-1", 3) == (2.0, 1.0, 0.0)
    assert parse_beta("1,2,4", 3) == (1.0, 2.0, 4.0)
    with pytest.raises(SchemaError):
        parse_beta("1,2", 3)
    with pytest.raises(SchemaError):
        parse_beta("lin:1", 3)
    with pytest.raises(SchemaError):
        parse_beta("spam", 3)


def test_torsion_circle_value(capsys):
    code, out, _ = run_cli(capsys, "torsion", "--preset", "circle",
                           "--theta", "1.5707963", "--beta", "k")
    assert code == 0
    value = [line for line in out.splitlines() if line.startswith("log torsion")]
    assert abs(float(value[0].split()[-1]) - 0.693147) < 1e-5


def test_torsion_json_round_trip(capsys):
    code, out, _ = run_cli(capsys, "torsion", "--preset", "circle",
                           "--theta", "2.5", "--beta", "k", "--json")
    assert code == 0
    payload = json.loads(out)
    expected = math.log(4.0 * math.sin(1.25) ** 2)
    assert payload["log_torsion"] == pytest.approx(expected, abs=1e-12)
    # bit-exact round trip through JSON
    assert json.loads(json.dumps(payload)) == payload
    assert payload["log_torsion"] == json.loads(json.dumps(payload))["log_torsion"]


def test_torsion_beta_warning(capsys):
    code, out, err = run_cli(capsys, "torsion", "--preset", "torus2",
                             "--alpha", "1.0", "--beta-angle", "0.3",
                             "--beta", "1,2,4")
    assert code == 0
    assert "not in span{1,k}" in err


def test_torsion_malformed_json_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"dimension": 1,')
    code, _, err = run_cli(capsys, "torsion", "--input", str(bad))
    assert code == 2
    assert "error" in err


def test_torsion_not_acyclic_exit_3(capsys, tmp_path):
    data = {
        "dimension": 1, "rank": 1, "generators": 0, "rep": [],
        "cells": [{"dim": 0, "boundary": []},
                  {"dim": 0, "boundary": []},
                  {"dim": 1, "boundary": [
                      {"cell": 1, "coeff": 1, "word": []},
                      {"cell": 0, "coeff": -1, "word": []}]}],
    }
    path = tmp_path / "interval.json"
    path.write_text(json.dumps(data))
    code, _, err = run_cli(capsys, "torsion", "--input", str(path))
    assert code == 3
    assert "degree 0" in err  # the failing degree is named


def test_zeta_torus_value(capsys):
    code, out, _ = run_cli(capsys, "zeta", "--model", "torus", "--n", "2",
                           "--L", "1", "--degree", "1", "--s", "0", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["value"] == pytest.approx(-2.0, abs=1e-9)


def test_zeta_sphere_value(capsys):
    code, out, _ = run_cli(capsys, "zeta", "--model", "sphere2",
                           "--degree", "0", "--s", "0", "--json")
    assert code == 0
    assert json.loads(out)["value"] == pytest.approx(-2.0 / 3.0, abs=1e-9)


def test_zeta_pole_exit_4(capsys):
    code, _, err = run_cli(capsys, "zeta", "--model", "circle", "--s", "0.5")
    assert code == 4
    assert "pole" in err


def test_zeta_boundary_model(capsys):
    code, out, _ = run_cli(capsys, "zeta", "--model", "interval",
                           "--condition", "relative", "--R", "1.0",
                           "--degree", "0", "--s", "0", "--json")
    assert code == 0
    assert json.loads(out)["value"] == pytest.approx(-0.5, abs=1e-12)


def test_model_torsion_sphere(capsys):
    code, out, _ = run_cli(capsys, "model-torsion", "--model", "sphere2",
                           "--beta", "1", "--kind", "residue", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["log_torsion_res"] == pytest.approx(2.0, abs=1e-9)


def test_model_torsion_boundary(capsys):
    code, out, _ = run_cli(capsys, "model-torsion", "--model", "interval",
                           "--condition", "absolute", "--beta", "k", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["log_torsion_res"] == pytest.approx(0.5, abs=1e-9)
    assert payload["flags"]["weighted_closed_form"] == pytest.approx(0.5)


def test_gluing_command(capsys):
    code, out, _ = run_cli(capsys, "gluing", "--geometry", "interval",
                           "--outer", "absolute", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["ok"] is True
    assert payload["lhs"] == pytest.approx(0.5)


def test_verify_command_exit_codes(capsys):
    code, out, _ = run_cli(capsys, "verify", "--suite", "boundary")
    assert code == 0
    assert "cases passed" in out


def test_verify_json_stable_and_deterministic(capsys):
    code1, out1, _ = run_cli(capsys, "verify", "--suite", "combinatorial", "--json")
    code2, out2, _ = run_cli(capsys, "verify", "--suite", "combinatorial", "--json")
    assert code1 == code2 == 0
    assert out1 == out2
    payload = json.loads(out1)
    assert payload["n_failed"] == 0
    ids = [case["case_id"] for case in payload["cases"]]
    assert ids == sorted(ids, key=ids.index)  # fixed registration order


def test_verify_loose_tolerance_passes(capsys):
    code, out, _ = run_cli(capsys, "verify", "--suite", "closed-spectral",
                           "--tol", "1e-6", "--json")
    assert code == 0
    assert json.loads(out)["n_failed"] == 0


def test_command_determinism(capsys):
    args = ("model-torsion", "--model", "sphere2", "--beta", "k",
            "--kind", "both", "--json")
    _, out1, _ = run_cli(capsys, *args)
    _, out2, _ = run_cli(capsys, *args)
    assert out1 == out2


def test_csv_output(capsys):
    code, out, _ = run_cli(capsys, "zeta", "--model", "torus", "--n", "2",
                           "--L", "1", "--degree", "1", "--s", "0", "--csv")
    assert code == 0
    rows = dict(line.split(",", 1) for line in out.splitlines())
    assert float(rows["value"]) == pytest.approx(-2.0)


def test_suite_provenance_tags_present():
    for result in run_suites("all"):
        assert result.provenance
        assert ":" in result.provenance or result.provenance in (
            "negative-control",)
