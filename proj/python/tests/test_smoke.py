import json
import math
import os
import subprocess

import pytest

import cqtf


def test_tf_constants():
    assert cqtf.mu_tf(1, 2.0, 1.0) == pytest.approx(2 / math.pi, rel=1e-12)
    assert cqtf.energy_limit_constant(3, 2.0, 1.0) == pytest.approx(2 / (3 * math.pi), rel=1e-12)
    prof = cqtf.tf_profile(1, 2.0, 1.0)
    assert prof(0.0) == pytest.approx((2 / math.pi) ** 0.25)
    assert cqtf.tf_integrals(prof)["mass"] == pytest.approx(1.0)


def test_potentials_and_errors():
    trap = cqtf.PotentialSpec.magnetic_trap(1.0, 1.0)
    assert cqtf.eval(trap, 0.0) == 1.0
    value, fallback = cqtf.radial_virial(trap, 1.0)
    assert value == pytest.approx(2 - 2 / math.e)
    assert not fallback
    with pytest.raises(ValueError):
        cqtf.eval(trap, -1.0)
    with pytest.raises(cqtf.DomainError):
        cqtf.PotentialSpec.pure_power(1.0, 1.0)


def test_solve_and_report():
    cfg = cqtf.SolverConfig()
    cfg.n = 512
    spec = cqtf.PotentialSpec.pure_power(1.0, 2.0)
    states = cqtf.sweep(cfg, spec, [1e3, 1e4, 1e5], 3)
    s = states[1]
    assert cqtf.integrate(s.field_w, 2.0) == pytest.approx(1.0, abs=1e-10)
    assert s.el_residual <= 1e-6
    assert cqtf.lagrange_multiplier(s) == pytest.approx(s.mu_tau)
    assert json.loads(s.to_json())["N"] == 1e4
    rep = cqtf.report(states, cqtf.tf_profile(1, 2.0, 1.0))
    assert [r["tau"] for r in rep["rows"]] == sorted((r["tau"] for r in rep["rows"]), reverse=True)
    assert rep["fits"]["energy"]["exponent"] == pytest.approx(1.0, abs=0.05)


def test_fit_power_law():
    fit = cqtf.fit_power_law([1, 2, 4], [1, 4, 16])
    assert fit.exponent == pytest.approx(2.0)
    with pytest.raises(cqtf.ArityError):
        cqtf.fit_power_law([1, 2], [1, 2])


def test_run_config(tmp_path):
    cfg = {"command": "tf", "output_dir": str(tmp_path / "tf")}
    status, log = cqtf.run(json.dumps(cfg))
    assert status == 0
    assert json.loads(log)["mu_tf"] == pytest.approx(2 / math.pi)
    status, _ = cqtf.run(json.dumps({"command": "solve", "N": -1, "output_dir": str(tmp_path / "x")}))
    assert status == 2


@pytest.mark.skipif(not os.environ.get("CQTF_CLI"), reason="command-line tool not built")
def test_cli_flags_override_config(tmp_path):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"command": "tf", "potential": {"C0": 9.0}}))
    out = subprocess.run([os.environ["CQTF_CLI"], "tf", "--config", str(conf), "--C0", "1",
                          "--out", str(tmp_path / "o")], capture_output=True, text=True, check=True)
    assert json.loads(out.stdout)["C0"] == 1
    manifest = json.loads((tmp_path / "o" / "manifest.json").read_text())
    assert manifest["config"]["potential"]["C0"] == 1
