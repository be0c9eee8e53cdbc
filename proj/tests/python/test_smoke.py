import cmath
import json
import math
import pathlib

import numpy as np
import pytest

import qcohom

CONFIGS = pathlib.Path(__file__).resolve().parents[2] / "configs"


def test_names():
    assert qcohom.suite_names() == ["shift-cocycles", "cohomology", "car", "perturbation"]
    assert "literal-constructor-unitarity" in qcohom.registered_findings()


def test_car_suite_records():
    records = qcohom.run_suite("car")
    assert records
    for r in records:
        assert set(r) >= {"suite", "check", "params", "residual", "tolerance", "status"}
        assert r["status"] == ("pass" if r["residual"] <= r["tolerance"] else "fail")
    assert all(r["status"] == "pass" for r in records)


def test_shift_suite_defect_index_and_outputs(tmp_path):
    records = qcohom.run_suite("shift-cocycles", window=64, out=str(tmp_path))
    defect = [r for r in records if r["check"] == "defect-index"]
    assert defect and defect[0]["params"]["defect_index"] == 1
    assert not [r for r in records if r["status"] == "fail"]
    findings = {r["check"] for r in records if r["status"] == "finding"}
    assert findings <= set(qcohom.registered_findings())
    lines = (tmp_path / "report.jsonl").read_text().splitlines()
    assert [json.loads(l) for l in lines] == records
    assert (tmp_path / "plots" / "hs_convergence_N64.svg").read_text().startswith("<svg")
    assert (tmp_path / "series" / "hs_values_N64.csv").read_text().startswith("truncation,hs_norm")


def test_literal_flag_gives_a_finding():
    records = qcohom.run_suite("shift-cocycles", window=64, literal=True)
    lit = [r for r in records if r["check"] == "literal-constructor-unitarity"]
    assert len(lit) == 1 and lit[0]["status"] == "finding"
    assert abs(lit[0]["params"]["norm_W-1_e1"] - math.sqrt(2)) < 1e-12


def test_determinism():
    a = qcohom.run_suite_jsonl("cohomology", seed=5)
    assert a == qcohom.run_suite_jsonl("cohomology", seed=5)
    assert a != qcohom.run_suite_jsonl("cohomology", seed=6)


def test_config_errors():
    with pytest.raises(ValueError):
        qcohom.run_suite("car", config=str(CONFIGS / "missing.ini"))
    with pytest.raises(ValueError):
        qcohom.run_suite("shift-cocycles", window=7)


def test_trivial_config():
    records = qcohom.run_suite("perturbation", config=str(CONFIGS / "trivial.ini"))
    assert all(r["status"] == "pass" for r in records)


def test_demo_inner():
    d = qcohom.demo_inner([0.5], [1.0], window=64)
    assert d["model_dimension"] == 1
    assert d["defect_index"] == 1
    flat = qcohom.demo_inner([], [], window=32)
    assert flat["model_dimension"] == 0 and flat["identity_residual"] == 0.0
    two = qcohom.demo_inner([0.3, -0.4j], [cmath.exp(0.4j), cmath.exp(2.0j)], window=64)
    assert two["model_dimension"] == 2 and two["spectrum_mismatch"] < 1e-9


def test_cocycle_matrices():
    lam = cmath.exp(0.9j)
    w = qcohom.markovian_cocycle([0j], [lam], window=16)
    w1 = w.at(-1)
    assert w1.shape == (32, 32)
    # e_0 -> e_1 and e_1 -> lambda e_0 at sites 0, 1 (rows/columns 16, 17)
    assert w1[17, 16] == pytest.approx(1.0)
    assert w1[16, 17] == pytest.approx(lam)
    assert np.allclose(w1.conj().T @ w1, np.eye(32), atol=1e-12)
    r = w.verify(3)
    assert max(r.values()) < 1e-10
    assert w.defect_index() == 1
    assert qcohom.trivial_cocycle(16).defect_index() == 1


def test_taylor_coefficients_match_long_division():
    c = qcohom.taylor_coefficients([0.5], 6)
    # (1/2 - z) / (1 - z/2)
    expect = [0.5] + [-(0.75) * 0.5 ** (k - 1) for k in range(1, 6)]
    assert np.allclose(c, expect, atol=1e-12)


def test_car_relations():
    r = qcohom.car_relations(-3, 4)
    assert r["car"] == 0.0 and r["parity_ok"]
    assert r["witness"][1:] == pytest.approx([n - 1 for n in range(2, len(r["witness"]) + 1)])
