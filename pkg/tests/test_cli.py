from __future__ import annotations

import json
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest

from barut_kit import cli, jsonio, verification


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_spectrum_dirac_point(capsys):
    code, doc = run_json(capsys, "spectrum", "--a", "1", "--b", "0", "--m", "1")
    assert code == 0
    assert doc["schema"] == "barut-kit/1"
    assert [(s["mass"], s["multiplicity"]) for s in doc["spectrum"]] == [(1.0, 8)]


def test_spectrum_split(capsys):
    code, doc = run_json(capsys, "spectrum", "--a", "1", "--b", "0.5", "--m", "1")
    assert code == 0
    assert [s["mass"] for s in doc["spectrum"]] == pytest.approx([0.5, 1.5])
    assert doc["verified"] is True


def test_spectrum_third_order(capsys):
    code, doc = run_json(capsys, "spectrum", "--third-order", "--a", "1", "--b1", "0.3", "--b2", "0.2",
                         "--m", "1", "--branch", "++")
    assert code == 0
    assert [s["mass"] for s in doc["spectrum"]] == pytest.approx([0.7, 1.3, 1.5])
    assert len({s["branch"] for s in doc["spectrum"]}) == 3


def test_spectrum_usage_errors(capsys):
    assert run(capsys, "spectrum", "--a", "0")[0] == 2
    assert run(capsys, "spectrum", "--a", "1", "--third-order", "--branch", "+x")[0] == 2
    assert run(capsys, "spectrum", "--a", "abc")[0] == 2
    assert run(capsys, "spectrum")[0] == 2


def test_spectrum_csv(capsys):
    code, out, _ = run(capsys, "--output", "csv", "spectrum", "--a", "1", "--b", "0.5")
    assert code == 0
    assert out.splitlines() == ["mass,multiplicity,branch", "0.5,4,-", "1.5,4,+"]


def test_massless_root_warning(capsys):
    code, doc = run_json(capsys, "spectrum", "--a", "2", "--b", "1")
    assert code == 0
    assert doc["spectrum"][0]["warning"] == "massless root"


def test_leptons_defaults(capsys):
    code, doc = run_json(capsys, "leptons")
    assert code == 0
    masses = doc["masses_mev"]
    assert masses["tau"] == pytest.approx(1786.08, abs=0.01)
    assert masses["muon"] == pytest.approx(105.55, abs=0.01)
    assert masses["electron"] == 0.511
    assert doc["constants"]["alpha_inverse"] == 137.03


def test_leptons_constant_sensitivity(capsys):
    _, doc = run_json(capsys, "leptons", "--alpha-inverse", "137.0359895")
    assert doc["masses_mev"]["tau"] == pytest.approx(1786.16, abs=0.005)


def test_config_file_and_env_override(capsys, tmp_path, monkeypatch):
    a = tmp_path / "a.json"
    a.write_text(json.dumps({"alpha_inverse": 100.0}))
    b = tmp_path / "b.json"
    b.write_text(json.dumps({"alpha_inverse": 200.0, "electron_mass_mev": 1.0}))
    _, doc = run_json(capsys, "--config", str(a), "leptons")
    assert doc["constants"]["alpha_inverse"] == 100.0
    monkeypatch.setenv(cli.CONFIG_ENV, str(b))
    _, doc = run_json(capsys, "--config", str(a), "leptons")
    assert doc["constants"] == {"alpha_inverse": 200.0, "electron_mass_mev": 1.0}


@pytest.mark.parametrize("payload", [
    {"tolerance": 1e-3}, {"alpha_inverse": -1}, {"box_length": 0}, {"output_format": "xml"},
    {"unknown": 1}, [1, 2],
])
def test_invalid_config(capsys, tmp_path, payload):
    path = tmp_path / "c.json"
    path.write_text(json.dumps(payload))
    assert run(capsys, "--config", str(path), "leptons")[0] == 2


def test_invalid_tolerance_flag(capsys):
    assert run(capsys, "--tolerance", "1e-3", "leptons")[0] == 2
    assert run(capsys, "leptons", "--tolerance", "1e-3")[0] == 2


def test_csv_rejected_for_json_only_commands(capsys):
    assert run(capsys, "--output", "csv", "leptons")[0] == 2


def test_invariants_empty(capsys, tmp_path):
    path = tmp_path / "ms.json"
    path.write_text(json.dumps({"L": 5, "m": 1, "modes": []}))
    code, doc = run_json(capsys, "invariants", str(path))
    assert code == 0
    assert doc["report"]["hamiltonian"] == [0.0, 0.0]
    assert doc["report"]["charge"] == [0.0, 0.0]


def test_invariants_single_dirac_mode(capsys, tmp_path):
    path = tmp_path / "ms.json"
    path.write_text(json.dumps({"L": 8, "m": 1, "modes": [{"n": [1, 0, 0], "h": 0.5, "a": [1, 0], "b": [0, 0]}]}))
    code, doc = run_json(capsys, "invariants", str(path))
    assert code == 0
    coef = doc["modes"][0]["hamiltonian_coefficient"]
    h = doc["report"]["hamiltonian"]
    assert h[0] == pytest.approx(coef[0] / 512, rel=1e-12)
    assert h[0] == pytest.approx((1 + (np.pi / 4) ** 2) / 512, rel=1e-12)


def test_invariants_box_length_from_config(capsys, tmp_path):
    ms = tmp_path / "ms.json"
    ms.write_text(json.dumps({"m": 1, "modes": [{"n": [0, 0, 0], "h": -0.5, "a": [1, 0]}]}))
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"box_length": 3.0}))
    _, doc = run_json(capsys, "--config", str(cfg), "invariants", str(ms))
    assert doc["modeset"]["L"] == 3.0


def test_invariants_bad_input(capsys, tmp_path):
    path = tmp_path / "ms.json"
    path.write_text("{not json")
    assert run(capsys, "invariants", str(path))[0] == 2
    path.write_text(json.dumps({"L": 5, "m": 1, "modes": [{"n": [1], "h": 0.5}]}))
    assert run(capsys, "invariants", str(path))[0] == 2
    assert run(capsys, "invariants", str(tmp_path / "missing.json"))[0] == 2


def test_transform_majorana(capsys):
    code, doc = run_json(capsys, "transform", "--rep", "majorana")
    assert code == 0
    assert doc["max_abs_real_part"] < 1e-12
    assert len(doc["gammas"]) == 4
    c = np.array(doc["charge_conjugation"])
    assert np.allclose(c[..., 0], -np.eye(4)) and np.allclose(c[..., 1], 0)
    assert doc["majorana_report"]["U C U^T = -1"] < 1e-12


@pytest.mark.parametrize("args", [
    ["--field", "zero"],
    ["--field", "constant", "--c", "0.1,0.2,0.3,0.4", "--e", "0.5"],
    ["--field", "constant_f", "--B", "0.7"],
    ["--field", "constant_f", "--F", "0,1,0,0,-1,0,0,0,0,0,0,2,0,0,-2,0"],
])
def test_fgm_check(capsys, args):
    code, doc = run_json(capsys, "fgm-check", *args)
    assert code == 0
    assert doc["verified"] is True
    assert doc["squared_dirac_residual"] < 1e-10


def test_fgm_check_usage_errors(capsys):
    assert run(capsys, "fgm-check", "--field", "constant", "--c", "1,2")[0] == 2
    assert run(capsys, "fgm-check", "--field", "constant", "--B", "0.3")[0] == 2
    assert run(capsys, "fgm-check", "--field", "constant_f", "--F", "1," * 15 + "1")[0] == 2


def test_verify_algebra(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "algebra")
    assert code == 0
    assert "Clifford relations: PASS" in out
    assert "summary algebra: 11/11 passed" in out


def test_verify_noether_mentions_alpha3(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "noether")
    assert code == 0
    assert "alpha3 charge term vanishes: PASS" in out


def test_verify_corrupted_u_fails(capsys):
    code, out, err = run(capsys, "verify", "--suite", "majorana", "--corrupt-u")
    assert code == 1
    assert "FAILED: majorana: U unitary" in err


def test_verify_reports_printed_identity_as_note(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "majorana")
    assert code == 0
    assert "U C U^-1 = -C as printed: NOTE, does not hold" in out


def test_spinors_table(capsys):
    code, out, _ = run(capsys, "--output", "csv", "spinors", "--p", "0,0,0.5", "--p", "0.1,0.2,0.3")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("p0,p1,p2,p3,h,kind,re0,im0")
    assert len(lines) == 1 + 2 * 4
    assert run(capsys, "spinors", "--a", "1", "--b", "0.3")[0] == 2


def test_output_is_byte_identical(capsys):
    first = run(capsys, "spectrum", "--a", "1.3", "--b", "0.25", "--m", "0.7")[1]
    second = run(capsys, "spectrum", "--a", "1.3", "--b", "0.25", "--m", "0.7")[1]
    assert first == second


def test_console_entry_point_runs():
    proc = subprocess.run([sys.executable, "-m", "barut_kit.cli", "leptons"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["masses_mev"]["tau"] == pytest.approx(1786.08, abs=0.01)
    proc = subprocess.run([sys.executable, "-m", "barut_kit.cli", "nonsense"], capture_output=True, text=True)
    assert proc.returncode == 2


def test_json_emitter_rules():
    text = jsonio.dumps({"b": 0.1, "a": [1 + 2j, Fraction(1, 4), np.float64(3.0), np.int64(2), True, None]})
    assert text.index('"a"') < text.index('"b"')
    assert "0.10000000000000001" in text
    assert "[1.0, 2.0]," in text
    assert json.loads(text) == {"a": [[1.0, 2.0], 0.25, 3.0, 2, True, None], "b": 0.1}
    assert jsonio.dumps([1.5, 2, False]).strip() == "[1.5, 2, false]"
    assert jsonio.dumps({"x": float("nan")}).strip() == '{\n  "x": null\n}'
    with pytest.raises(TypeError):
        jsonio.dumps({"x": object()})


def test_json_float_round_trip():
    rng = np.random.default_rng(0)
    vals = list(rng.normal(size=50) * 10.0 ** rng.integers(-20, 20, size=50))
    assert json.loads(jsonio.dumps(vals)) == vals


def test_verification_registry_covers_all_suites():
    assert set(verification.REGISTRY) == set(verification.SUITES)
    with pytest.raises(ValueError):
        verification.run_suite("nope")
