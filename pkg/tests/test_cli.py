import json

import pytest

from kerrcat.cli import (ConfigError, DEFAULTS, PRESETS, config_hash,
                         load_config, main)


def test_presets_complete():
    for name, preset in PRESETS.items():
        cfg = load_config(name, {})
        assert "scheme" in cfg
        assert cfg["alpha2_list"]
        assert cfg["T_list"]
        # defaults filled in
        assert cfg["fock_dim"] == DEFAULTS["fock_dim"]


def test_load_config_file_and_overrides(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"scheme": "X", "alpha2_list": [2.0], "T_list": [10.0]}))
    cfg = load_config(str(path), {"fock_dim": 12, "seed": None})
    assert cfg["fock_dim"] == 12
    assert cfg["seed"] == DEFAULTS["seed"]
    assert cfg["scheme"] == "X"


def test_load_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_config("no-such-preset-or-file", {})
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(str(bad), {})
    neg = tmp_path / "neg.json"
    neg.write_text(json.dumps({"delta_max": -1.0}))
    with pytest.raises(ConfigError):
        load_config(str(neg), {})
    empty = tmp_path / "empty.json"
    empty.write_text(json.dumps({"alpha2_list": []}))
    with pytest.raises(ConfigError):
        load_config(str(empty), {})


def test_config_hash_deterministic():
    a = config_hash({"x": 1, "y": [1, 2]})
    b = config_hash({"y": [1, 2], "x": 1})
    assert a == b
    assert len(a) == 16
    assert a != config_hash({"x": 2, "y": [1, 2]})


def test_exit_code_config_error(capsys):
    assert main(["--config", "missing.json", "spectrum"]) == 1
    assert "config error" in capsys.readouterr().err


def test_robust_line_command(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"fock_dim": 25, "alpha2_list": [1.5, 2.0]}))
    out = tmp_path / "out"
    assert main(["--config", str(cfg), "--out", str(out), "robust-line"]) == 0
    rows = (out / "robust_line.csv").read_text().strip().splitlines()
    assert rows[0].startswith("alpha2,delta_rob,gap")
    assert len(rows) == 3
    d15 = float(rows[1].split(",")[1])
    assert d15 == pytest.approx(0.3503, abs=2e-3)


def test_spectrum_command(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"fock_dim": 20, "n_delta": 6, "n_alpha2": 5}))
    out = tmp_path / "out"
    assert main(["--config", str(cfg), "--out", str(out), "spectrum"]) == 0
    land = (out / "gap_landscape.csv").read_text().strip().splitlines()
    assert land[0] == "delta,alpha2,gap,gap_deriv"
    assert len(land) == 1 + 6 * 5


def test_twoqubit_command_byte_identical(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"alpha2_A": 2.0, "alpha2_B": 1.5, "T": 15.0}))
    out1, out2 = tmp_path / "o1", tmp_path / "o2"
    assert main(["--config", str(cfg), "--out", str(out1), "twoqubit"]) == 0
    assert main(["--config", str(cfg), "--out", str(out2), "twoqubit"]) == 0
    b1 = (out1 / "twoqubit_report.json").read_bytes()
    b2 = (out2 / "twoqubit_report.json").read_bytes()
    assert b1 == b2
    report = json.loads(b1)
    assert report["echo_distance"] < 1e-10
    assert "config_hash" in report


def test_convergence_command(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "scheme": "X", "alpha2": 2.0, "T": 15.0,
        "fock_dim": 14, "n_steps": 150, "n_nodes": 3,
        "drift_tol": 1e-2,
    }))
    out = tmp_path / "out"
    assert main(["--config", str(cfg), "--out", str(out), "convergence"]) == 0
    report = json.loads((out / "convergence_report.json").read_text())
    assert set(report["values"]) == {"base", "dim2x", "dthalf"}
    assert report["max_drift"] >= 0.0


def test_gate_sweep_small(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "scheme": "X", "alpha2_list": [2.0], "T_list": [15.0],
        "fock_dim": 20, "n_steps": 100, "n_nodes": 3,
        "coarse_n": 5, "refine_rounds": 1,
    }))
    out = tmp_path / "out"
    assert main(["--config", str(cfg), "--out", str(out), "gate-sweep"]) == 0
    payload = json.loads((out / "gate_sweep.json").read_text())
    rec = payload["records"][0]
    assert rec["feasible"]
    assert rec["avg_infidelity"] < 1e-2
    csv_rows = (out / "gate_sweep.csv").read_text().strip().splitlines()
    assert len(csv_rows) == 2
