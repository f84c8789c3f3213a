import csv
import json
import os

import pytest

from cwtinv import cli

FAST = ["--n", "256", "--delta", "0.125"]


def run_cli(tmp_path, *args, name="out"):
    out = tmp_path / name
    code = cli.main([*args, "--out", str(out)])
    return code, out


def test_defaults():
    cfg = cli.parse_config(["reconstruct"])
    assert cfg.omega0 == 6.0 and cfg.n == 1024 and cfg.method == "alternative_general"
    assert cfg.a_min is None and cfg.layout == "mirrored"
    assert cfg.formats == ("csv", "json")
    assert cli.parse_config(["transform"]).formats == ("wrec1", "json")


def test_negative_omega0_message(capsys):
    with pytest.raises(cli.ConfigError) as info:
        cli.parse_config(["reconstruct", "--omega0", "-1"])
    assert "ω0 must be ≥ 0" in str(info.value)
    assert cli.main(["reconstruct", "--omega0=-1"]) == 2
    payload = json.loads(capsys.readouterr().err)
    assert payload["error_type"] == "ConfigError"


def test_all_errors_reported():
    with pytest.raises(cli.ConfigError) as info:
        cli.parse_config(["sweep-omega0", "--n", "7", "--delta", "2", "--bogus", "1", "--layout", "x"])
    errors = info.value.errors
    assert len(errors) == 4
    assert any("unknown key 'bogus'" in e for e in errors)


def test_config_file_and_override(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# sweep setup\nomega0 = 2\nkernel = gaussian\nomega0_list = 0, 1\n")
    cfg = cli.parse_config(["sweep-omega0", "--config", str(path), "--omega0", "3"])
    assert cfg.omega0 == 3.0 and cfg.kernel == "gaussian" and cfg.omega0_list == (0.0, 1.0)


def test_unknown_command():
    with pytest.raises(cli.ConfigError, match="unknown command"):
        cli.parse_config(["explode"])


def test_reconstruct_outputs(tmp_path):
    code, out = run_cli(tmp_path, "reconstruct", *FAST, "--omega0", "1")
    assert code == 0
    assert sorted(os.listdir(out)) == ["error_report.json", "manifest.json", "reconstruction.csv"]
    report = json.loads((out / "error_report.json").read_text())
    assert report["rel_l2"] < 5e-2 and report["method"] == "alternative_general"
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["config"]["omega0"] == 1.0
    assert set(manifest["outputs"]) == {"error_report.json", "reconstruction.csv"}
    assert manifest["backend"] in ("cython", "python")
    with open(out / "reconstruction.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["x", "re_f", "im_f", "re_rec", "im_rec"] and len(rows) == 257


def test_classical_morlet_fails_at_run_time(tmp_path, capsys):
    cfg = cli.parse_config(["reconstruct", "--method", "classical", "--omega0", "6", "--norm_mode", "2"])
    assert cfg.method == "classical"
    code, out = run_cli(tmp_path, "reconstruct", *FAST, "--method", "classical", "--norm_mode", "2")
    assert code == 1
    assert os.listdir(out) == ["error.json"]
    err = json.loads((out / "error.json").read_text())
    assert err["error_type"] == "AdmissibilityError"
    assert json.loads(capsys.readouterr().err)["error_type"] == "AdmissibilityError"


def test_diagnose_kernel(tmp_path):
    code, out = run_cli(tmp_path, "diagnose-kernel")
    assert code == 0
    payload = json.loads((out / "admissibility.json").read_text())
    assert payload["admissibility"]["verdict"] == "non-admissible"
    assert payload["classical_applicable"] is False and payload["alternative_applicable"] is True
    assert payload["c_psi_delta_prime"][1] != 0


def test_sweep_omega0_csv(tmp_path):
    code, out = run_cli(tmp_path, "sweep-omega0", *FAST, "--omega0_list", "0,1,5")
    assert code == 0
    with open(out / "sweep_omega0.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert [float(r["omega0"]) for r in rows] == [0.0, 1.0, 5.0]
    assert all(r["classical"] == "N/A (non-admissible)" for r in rows)


def test_compare_methods_statuses(tmp_path):
    code, out = run_cli(tmp_path, "compare-methods", *FAST, "--omega0", "1")
    assert code == 0
    rows = json.loads((out / "methods.json").read_text())["rows"]
    status = {r["method"]: r["status"] for r in rows}
    assert status == {
        "alternative_general": "ok",
        "alternative_analytic": "PreconditionError",
        "classical": "AdmissibilityError",
    }


def test_transform_binary(tmp_path):
    from cwtinv.io import read_scalogram_binary

    code, out = run_cli(tmp_path, "transform", *FAST)
    assert code == 0
    meta = json.loads((out / "transform.json").read_text())
    assert read_scalogram_binary(out / "scalogram.wrec1").shape == tuple(meta["shape"])


def test_sweep_convergence_derivative(tmp_path):
    code, out = run_cli(tmp_path, "sweep-convergence", "--sweep_kind", "derivative", "--resolutions", "256,512,1024")
    assert code == 0
    summary = json.loads((out / "sweep_convergence.json").read_text())
    assert 1.9 <= summary["observed_order"] <= 2.1


def test_repeat_runs_byte_identical(tmp_path):
    args = ("sweep-omega0", *FAST, "--omega0_list", "1,2")
    _, a = run_cli(tmp_path, *args, name="a")
    _, b = run_cli(tmp_path, *args, name="b")
    for name in ("sweep_omega0.csv", "sweep_omega0.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    ma = json.loads((a / "manifest.json").read_text())
    mb = json.loads((b / "manifest.json").read_text())
    assert ma["outputs"] == mb["outputs"]


def test_lock_prevents_concurrent_runs(tmp_path):
    out = tmp_path / "locked"
    out.mkdir()
    (out / cli.LOCK_NAME).write_text("1")
    code = cli.main(["diagnose-kernel", "--out", str(out)])
    assert code == 1
    assert not (out / "admissibility.json").exists()


def test_no_partial_files_on_failure(tmp_path):
    code, out = run_cli(tmp_path, "reconstruct", *FAST, "--signal", "gaussian_derivative", "--method", "alternative_analytic")
    assert code == 1
    assert not [p for p in os.listdir(out) if p.endswith(".partial")]
    assert sorted(os.listdir(out)) == ["error.json"]


def test_help(capsys):
    assert cli.main(["--help"]) == 0
    assert "omega0" in capsys.readouterr().out
