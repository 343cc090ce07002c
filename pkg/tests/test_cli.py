import json
import os

import pandas as pd
import pytest

from helmguard.main import main
from helmguard.services.export import LOG_COLUMNS


def run_cli(*argv):
    return main([str(arg) for arg in argv])


def test_version(capsys):
    with pytest.raises(SystemExit) as excinfo:
        run_cli("--version")
    assert excinfo.value.code == 0
    assert "1.0.0" in capsys.readouterr().out


def test_missing_scenario_file(tmp_path):
    assert run_cli("run", "--scenario", tmp_path / "missing.json", "--out", tmp_path) == 1


def test_usage_error_is_exit_one(capsys):
    assert run_cli("run", "--mode", "qp") == 1
    assert run_cli("run", "--scenario", "x.json", "--mode", "sideways") == 1
    capsys.readouterr()


def test_malformed_json_reports_position(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "dt": 0.01,\n  "duration": \n}\n')
    assert run_cli("run", "--scenario", path, "--out", tmp_path) == 1
    assert "line 4" in capsys.readouterr().err


def test_invalid_field_reports_location(tmp_path, capsys):
    path = tmp_path / "invalid.json"
    path.write_text(json.dumps({"dt": -1.0, "gains": {"k_p": 0.0}}))
    assert run_cli("run", "--scenario", path, "--out", tmp_path) == 1
    err = capsys.readouterr().err
    assert "dt" in err
    assert "gains.k_p" in err


def test_run_writes_log_and_report(straight_tow_path, tmp_path):
    assert run_cli("run", "--scenario", straight_tow_path, "--mode", "qp", "--out", tmp_path, "--duration", 2.0) == 0

    frame = pd.read_csv(tmp_path / "straight_tow_qp.csv")
    assert list(frame.columns) == LOG_COLUMNS
    assert len(frame) == 201
    assert frame["t"].iloc[-1] == pytest.approx(2.0)
    assert set(frame["qp_status"]) == {"unconstrained"}

    report = json.loads((tmp_path / "straight_tow_qp.json").read_text())
    assert report["outcome"] == "completed"
    assert report["steps"] == 201
    assert report["qp_activation_fraction"] == 0.0
    assert str(tmp_path / "straight_tow_qp.csv") in report["files"]


def test_unwritable_output_is_exit_one(straight_tow_path, tmp_path, capsys):
    blocker = tmp_path / "taken"
    blocker.write_text("not a directory")
    code = run_cli("run", "--scenario", straight_tow_path, "--out", blocker, "--duration", 0.5)
    assert code == 1
    assert "cannot write output" in capsys.readouterr().err
    assert blocker.read_text() == "not a directory"


def test_dt_override(straight_tow_path, tmp_path):
    assert run_cli("run", "--scenario", straight_tow_path, "--out", tmp_path, "--duration", 1.0, "--dt", 0.05) == 0
    assert len(pd.read_csv(tmp_path / "straight_tow_qp.csv")) == 21


def test_csv_is_reproducible(towing_circle_path, tmp_path):
    for name in ("a", "b"):
        out = tmp_path / name
        assert run_cli("run", "--scenario", towing_circle_path, "--out", out, "--duration", 3.0) == 0
    first = (tmp_path / "a" / "towing_circle_qp.csv").read_bytes()
    second = (tmp_path / "b" / "towing_circle_qp.csv").read_bytes()
    assert first == second


def test_breakdown_exit_code(towing_circle_path, tmp_path):
    code = run_cli("run", "--scenario", towing_circle_path, "--mode", "reference", "--out", tmp_path, "--duration", 150)
    assert code == 2
    report = json.loads((tmp_path / "towing_circle_reference.json").read_text())
    assert report["outcome"] == "breakdown"
    assert report["breakdown_t"] is not None


def test_compare_refuses_identical_modes(straight_tow_path, tmp_path):
    assert run_cli("compare", "--scenario", straight_tow_path, "--out", tmp_path, "--modes", "qp", "qp") == 1
    assert not os.path.exists(tmp_path / "compare.json")


def test_compare_benign_scenario(straight_tow_path, tmp_path, capsys):
    assert run_cli("compare", "--scenario", straight_tow_path, "--out", tmp_path) == 0
    summary = json.loads((tmp_path / "compare.json").read_text())
    assert [run["mode"] for run in summary["runs"]] == ["reference", "qp"]
    assert all(run["outcome"] == "completed" for run in summary["runs"])
    assert all(run["qp_activation_fraction"] == 0.0 for run in summary["runs"])
    assert summary["runs"][1]["steady_p_e"] == pytest.approx(6.0)
    out = capsys.readouterr().out
    assert "reference" in out and "qp" in out
