import json
import math
from pathlib import Path

import pytest
from typer.testing import CliRunner

from cli.main import app
from cli.models import APPLICABLE_CHECKS, CheckName, ExperimentConfig, ModelType
from cli.utils import ConfigError, load_experiment, parse_overrides

runner = CliRunner()

CONFIG_DIR = Path(__file__).resolve().parent.parent / "config"

RABI_CHECKS = ["structural", "survival_ks", "equivariance", "expected_jumps", "rho_leq_mu", "node_avoidance"]


def _write(path, experiment):
    path.write_text(json.dumps(experiment, indent=2), encoding="utf-8")
    return path


def _rabi_experiment(**ensemble):
    settings = {"M": 200, "t0": 0.0, "horizon": math.pi / 2 - 1e-6, "checkpoints": [0.3, 0.7, 1.2]}
    settings.update(ensemble)
    return {
        "model": "TWO_LEVEL",
        "params": {"omega": 1.0},
        "sampler": {"seed": 7},
        "ensemble": settings,
        "checks": RABI_CHECKS,
    }


def test_run_rabi_suite(tmp_path):
    config = _write(tmp_path / "rabi.json", _rabi_experiment())
    out = tmp_path / "out"
    result = runner.invoke(app, ["run", str(config), "--out", str(out), "--jobs", "2"])
    assert result.exit_code == 0, result.output
    report = json.loads((out / "report.json").read_text())
    assert report["model"] == "TWO_LEVEL"
    assert [c["name"] for c in report["checks"]] == RABI_CHECKS
    assert all(c["passed"] for c in report["checks"])
    lines = (out / "trajectories.csv").read_text().splitlines()
    assert lines[0] == "trajectory_id,jump_index,time,from_label,to_label,status"
    assert len(lines) == 1 + 2 * 200
    assert not (out / "convergence.csv").exists()


def test_run_is_reproducible_across_workers(tmp_path):
    config = _write(tmp_path / "rabi.json", {**_rabi_experiment(), "checks": ["structural"]})
    first, second = tmp_path / "a", tmp_path / "b"
    assert runner.invoke(app, ["run", str(config), "--out", str(first), "--jobs", "1", "--seed", "3"]).exit_code == 0
    assert runner.invoke(app, ["run", str(config), "--out", str(second), "--jobs", "4", "--seed", "3"]).exit_code == 0
    assert (first / "trajectories.csv").read_bytes() == (second / "trajectories.csv").read_bytes()
    assert json.loads((first / "report.json").read_text())["seed"] == 3


def test_failed_check_exits_with_one(tmp_path):
    experiment = _rabi_experiment(M=100, tv_tolerance=1e-12)
    experiment["checks"] = ["equivariance"]
    config = _write(tmp_path / "strict.json", experiment)
    out = tmp_path / "out"
    result = runner.invoke(app, ["run", str(config), "--out", str(out)])
    assert result.exit_code == 1
    report = json.loads((out / "report.json").read_text())
    assert report["checks"][0]["passed"] is False
    assert report["checks"][0]["retried"] is True


def test_horizon_before_start_is_invalid(tmp_path):
    config = _write(tmp_path / "bad.json", _rabi_experiment(t0=1.0, horizon=0.5, checkpoints=[]))
    result = runner.invoke(app, ["run", str(config), "--out", str(tmp_path / "out")])
    assert result.exit_code == 2
    assert "line" in result.output
    assert not (tmp_path / "out" / "report.json").exists()


def test_broken_json_is_invalid(tmp_path):
    config = tmp_path / "broken.json"
    config.write_text('{\n  "model": "TWO_LEVEL",\n  "params": {\n}', encoding="utf-8")
    result = runner.invoke(app, ["run", str(config)])
    assert result.exit_code == 2
    with pytest.raises(ConfigError, match="line"):
        load_experiment(config)


def test_error_names_the_offending_line(tmp_path):
    experiment = _rabi_experiment()
    experiment["params"] = {"omega": -1.0}
    config = _write(tmp_path / "negative.json", experiment)
    with pytest.raises(ConfigError) as info:
        load_experiment(config)
    line = next(i for i, text in enumerate(config.read_text().splitlines(), 1) if '"omega"' in text)
    assert f"line {line}:" in str(info.value)


def test_fock_source_off_the_lattice_names_its_line(tmp_path):
    experiment = {
        "model": "FOCK",
        "params": {"L": 3, "n_max": 2, "sources": [5]},
        "ensemble": {"M": 100, "t0": 0.0, "horizon": 1.0},
        "checks": ["structural"],
    }
    config = _write(tmp_path / "fock.json", experiment)
    with pytest.raises(ConfigError, match="lie outside 0..2") as info:
        load_experiment(config)
    line = next(i for i, text in enumerate(config.read_text().splitlines(), 1) if '"sources"' in text)
    assert f"line {line}:" in str(info.value)
    assert runner.invoke(app, ["run", str(config)]).exit_code == 2


def test_inapplicable_check_is_invalid(tmp_path):
    experiment = {**_rabi_experiment(), "checks": ["speed_bound"]}
    result = runner.invoke(app, ["run", str(_write(tmp_path / "x.json", experiment))])
    assert result.exit_code == 2


def test_lattice_run_writes_convergence_table(tmp_path):
    experiment = {
        "model": "LATTICE_1D",
        "params": {"L": 11, "eps": 0.5, "packet": {"x0": 0.1, "s0": 0.5, "u": 1.0}},
        "sampler": {"seed": 1},
        "ensemble": {"M": 5, "t0": 0.0, "horizon": 0.1},
        "checks": ["continuum_limit"],
    }
    out = tmp_path / "lattice"
    result = runner.invoke(app, ["run", str(_write(tmp_path / "lattice.json", experiment)), "--out", str(out)])
    assert result.exit_code == 0, result.output
    table = (out / "convergence.csv").read_text().splitlines()
    assert table[0] == "eps,drift,velocity,abs_error"
    assert len(table) == 4
    assert (out / "trajectories.csv").exists()


def test_describe_fock():
    result = runner.invoke(app, ["describe", "FOCK", "--param", "L=3", "--param", "n_max=2"])
    assert result.exit_code == 0, result.output
    assert "10" in result.output


def test_describe_two_level_reports_its_node():
    result = runner.invoke(app, ["describe", "TWO_LEVEL"])
    assert result.exit_code == 0, result.output
    assert "nodes" in result.output
    assert "1.57" in result.output


def test_describe_unknown_model():
    assert runner.invoke(app, ["describe", "HARMONIC"]).exit_code == 2


def test_describe_rejects_bad_parameters():
    assert runner.invoke(app, ["describe", "TWO_LEVEL", "--param", "omega=-2"]).exit_code == 2


def test_parse_overrides():
    assert parse_overrides(["L=3", "sources=[0, 2]", "initial=vacuum"]) == {
        "L": 3,
        "sources": [0, 2],
        "initial": "vacuum",
    }
    with pytest.raises(ConfigError):
        parse_overrides(["L3"])


def test_shipped_configs_are_valid():
    for name in ("rabi", "fock", "lattice", "dirac"):
        config = load_experiment(CONFIG_DIR / f"{name}.json")
        assert isinstance(config, ExperimentConfig)
        assert all(check in APPLICABLE_CHECKS[config.model] for check in config.checks)
    rabi = load_experiment(CONFIG_DIR / "rabi.json")
    assert rabi.model is ModelType.TWO_LEVEL
    assert len(rabi.checks) == 6
    assert CheckName.NODE_AVOIDANCE in rabi.checks
    fock = load_experiment(CONFIG_DIR / "fock.json")
    assert fock.ensemble.tv_tolerance == 0.02 and fock.ensemble.M >= 20000
