"""End-to-end CLI checks: artifacts, determinism, config handling, exit codes."""

import json

import numpy as np
import pytest

from dgspectra.cli import ConfigError, main, parse_tau_range


def read_csv(path):
    lines = path.read_text().strip().splitlines()
    return lines[0].split(","), [ln.split(",") for ln in lines[1:]]


def test_parse_tau_range():
    np.testing.assert_allclose(parse_tau_range("0:4:5"), [0.0, 1.0, 2.0, 3.0, 4.0])
    np.testing.assert_allclose(parse_tau_range("1:100:log3"), [1.0, 10.0, 100.0])
    for bad in ("1:2", "a:b:c", "1:2:log", "1;2;3"):
        with pytest.raises(ConfigError):
            parse_tau_range(bad)


def test_spectrum_artifacts(tmp_path):
    rc = main(["spectrum", "--system", "advection1d", "--elements", "8",
               "--degree", "3", "--flux", "penalty", "--tau", "0",
               "--out", str(tmp_path)])
    assert rc == 0
    header, rows = read_csv(tmp_path / "spectrum.csv")
    assert header == ["tau", "index", "re", "im", "wc_norm", "wnc_norm"]
    assert len(rows) == 32
    re = np.array([float(r[2]) for r in rows])
    assert np.abs(re).max() < 1e-10
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["config"]["system"] == "advection1d"
    assert any("spectrum.csv" in o for o in manifest["outputs"])


def test_byte_identical_reruns(tmp_path):
    args = ["spectrum", "--system", "acoustics1d", "--elements", "4",
            "--degree", "2", "--flux", "penalty", "--tau", "2"]
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert (a / "spectrum.csv").read_bytes() == (b / "spectrum.csv").read_bytes()


def test_manifest_round_trip(tmp_path):
    first = tmp_path / "first"
    assert main(["spectrum", "--system", "advection1d", "--elements", "4",
                 "--degree", "3", "--flux", "penalty", "--tau", "1.5",
                 "--out", str(first)]) == 0
    manifest = json.loads((first / "manifest.json").read_text())
    cfg = {k: v for k, v in manifest["config"].items() if k != "out"}
    cfg_path = tmp_path / "replay.json"
    cfg_path.write_text(json.dumps(cfg))
    second = tmp_path / "second"
    assert main(["spectrum", "--config", str(cfg_path), "--out", str(second)]) == 0
    assert ((first / "spectrum.csv").read_bytes()
            == (second / "spectrum.csv").read_bytes())


def test_outdir_env_var(tmp_path, monkeypatch):
    monkeypatch.setenv("DGSPECTRA_OUTDIR", str(tmp_path / "envout"))
    assert main(["assemble", "--system", "advection1d", "--elements", "2",
                 "--degree", "1", "--flux", "central"]) == 0
    assert (tmp_path / "envout" / "operator.json").exists()
    assert (tmp_path / "envout" / "mesh.json").exists()


def test_assemble_export(tmp_path):
    assert main(["assemble", "--system", "acoustics1d", "--elements", "2",
                 "--degree", "2", "--flux", "upwind", "--export",
                 "--out", str(tmp_path)]) == 0
    assert (tmp_path / "operator_K.mtx").exists()
    assert (tmp_path / "operator_M.mtx").exists()


def test_sweep_artifacts(tmp_path):
    assert main(["sweep", "--system", "advection1d", "--elements", "4",
                 "--degree", "3", "--flux", "penalty",
                 "--tau-range", "0:4:9", "--out", str(tmp_path)]) == 0
    header, rows = read_csv(tmp_path / "sweep.csv")
    assert header == ["tau", "path_id", "re", "im", "class"]
    assert len(rows) == 16 * 9
    summary = json.loads((tmp_path / "sweep.json").read_text())
    assert summary["n_paths"] == 16
    assert sum(summary["counts"].values()) == 16


def test_track_alias(tmp_path):
    assert main(["track", "--system", "advection1d", "--elements", "2",
                 "--degree", "2", "--flux", "penalty",
                 "--tau-range", "0:2:5", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "sweep.csv").exists()


def test_verify_lemma_small(tmp_path):
    assert main(["verify-lemma", "--system", "advection1d", "--elements", "4",
                 "--degree", "3", "--flux", "penalty",
                 "--tau-range", "100:1000:log8", "--out", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "verify_lemma.json").read_text())
    assert report["divergent_count"] == 4
    assert report["conforming_count"] == 12
    assert report["divergence_slopes_match"] is True
    assert report["convergence_slopes_in_range"] is True


def test_conforming_dims_cli(tmp_path):
    assert main(["conforming-dims", "--system", "acoustics2d", "--nx", "2",
                 "--ny", "2", "--bc", "periodic", "--degree", "3",
                 "--flux", "penalty", "--tau", "1", "--out", str(tmp_path)]) == 0
    doc = json.loads((tmp_path / "conforming_dims.json").read_text())
    assert doc["n_conforming"] == doc["oracle"]
    assert doc["n_conforming"] + doc["n_nonconforming"] == doc["n"]


def test_integrate_cli(tmp_path):
    assert main(["integrate", "--system", "advection1d", "--elements", "4",
                 "--degree", "3", "--flux", "penalty", "--tau", "1",
                 "--steps", "50", "--out", str(tmp_path)]) == 0
    header, rows = read_csv(tmp_path / "energy.csv")
    assert header == ["t", "energy"]
    assert len(rows) == 51
    e = np.array([float(r[1]) for r in rows])
    assert np.all(np.diff(e) <= 1e-13)


def test_preset_fig1(tmp_path):
    assert main(["preset", "fig1", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "sweep.csv").exists()
    summary = json.loads((tmp_path / "sweep.json").read_text())
    assert summary["n_paths"] == 32


def test_config_error_exit_codes(tmp_path, capsys):
    bad_cfg = tmp_path / "bad.json"
    bad_cfg.write_text(json.dumps({"system": "burgers1d"}))
    assert main(["spectrum", "--config", str(bad_cfg), "--out", str(tmp_path)]) == 2
    assert main(["sweep", "--system", "advection1d", "--flux", "penalty",
                 "--tau-range", "nope", "--out", str(tmp_path)]) == 2
    assert main(["sweep", "--system", "advection1d", "--flux", "penalty",
                 "--out", str(tmp_path)]) == 2  # missing tau range
    assert main(["preset", "figX", "--out", str(tmp_path)]) == 2
    assert main(["verify-lemma", "--system", "advection1d", "--flux", "central",
                 "--out", str(tmp_path)]) == 2
    capsys.readouterr()


def test_numerical_failure_exit_code(tmp_path, capsys):
    # No spurious mode returns inside a tiny tau window: expansion fails.
    rc = main(["expand-mode", "--system", "advection1d", "--elements", "2",
               "--degree", "1", "--flux", "penalty", "--tau", "0.1",
               "--out", str(tmp_path)])
    assert rc == 3
    assert "numerical failure" in capsys.readouterr().err
