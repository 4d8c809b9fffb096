import json

import numpy as np
import pytest

from acls import cli
from acls.experiments import (CSV_HEADER, AlgorithmSpec, CurveSummary,
                              ExperimentConfig, ProblemSpec, fit_slope,
                              iteration_ratio_to_reach,
                              lower_bound_experiment,
                              memory_tradeoff_experiment, read_curve_csv,
                              run_experiment)


def _custom_config(tmp_path, **overrides):
    cfg = {
        "experiment": "custom",
        "problem": {"kind": "gaussian", "dimension": 4,
                    "decay_exponent": 2.0, "noise_std": 0.05, "seed": 3},
        "algorithms": [
            {"name": "acsgd", "algorithm": "acsgd", "oracle": "sgd",
             "averaging": "weighted"},
            {"name": "sgd", "algorithm": "sgd", "oracle": "sgd",
             "averaging": "polyak"}],
        "iterations": 400,
        "repetitions": 2,
        "base_seed": 1,
        "output_dir": str(tmp_path / "out"),
    }
    cfg.update(overrides)
    return ExperimentConfig.from_dict(cfg)


# ---------------------------------------------------------------------------
# Slope fitting
# ---------------------------------------------------------------------------

def test_fit_slope_exact_quadratic_decay():
    ts = np.unique(np.geomspace(1, 10_000, 200).astype(int))
    est = fit_slope(ts, 3.7 / ts.astype(float) ** 2, 1, 10_000)
    assert est.slope == pytest.approx(-2.0, abs=1e-6)
    assert est.r_squared_fit > 1 - 1e-12


def test_fit_slope_exact_linear_decay():
    ts = np.unique(np.geomspace(1, 10_000, 200).astype(int))
    est = fit_slope(ts, 0.4 / ts.astype(float), 10, 5000)
    assert est.slope == pytest.approx(-1.0, abs=1e-6)


def test_fit_slope_window_errors():
    ts = np.arange(1, 100)
    risks = 1.0 / ts
    with pytest.raises(ValueError, match="need at least 5"):
        fit_slope(ts, risks, 1000, 2000)
    bad = risks.copy()
    bad[50] = 0.0
    with pytest.raises(ValueError, match="nonpositive"):
        fit_slope(ts, bad, 1, 99)


def test_iteration_ratio_on_synthetic_curves():
    ts = np.unique(np.geomspace(1, 100_000, 300).astype(int)).astype(float)
    fast = CurveSummary("fast", "sgd", "last", ts, 1.0 / ts ** 2,
                        np.zeros_like(ts), 1, 0)
    slow = CurveSummary("slow", "sgd", "last", ts, 50.0 / ts ** 2,
                        np.zeros_like(ts), 1, 0)
    # slow reaches fast's level at sqrt(50) times more iterations
    ratio = iteration_ratio_to_reach(slow, fast, target_t=1000)
    assert ratio == pytest.approx(np.sqrt(50), rel=0.05)


# ---------------------------------------------------------------------------
# Config handling
# ---------------------------------------------------------------------------

def test_unknown_keys_are_named():
    with pytest.raises(ValueError, match="typo_key"):
        ExperimentConfig.from_dict({"experiment": "custom",
                                    "typo_key": 1})
    with pytest.raises(ValueError, match="sigma"):
        ProblemSpec.from_dict({"kind": "gaussian", "sigma": 0.1})
    with pytest.raises(ValueError, match="lr"):
        AlgorithmSpec.from_dict({"name": "x", "lr": 0.1})


def test_named_experiment_defaults_fill_in():
    cfg = ExperimentConfig.from_dict({"experiment":
                                      "last_iterate_noiseless"})
    assert cfg.problem.dimension == 50
    assert cfg.problem.noise_std == 0.0
    assert cfg.iterations == 1_000_000
    assert cfg.repetitions == 10
    assert {a.name for a in cfg.algorithms} == {"acsgd", "sgd"}
    noisy = ExperimentConfig.from_dict({"experiment": "averaged_noisy"})
    assert noisy.problem.noise_std == 0.02


def test_partial_problem_override_keeps_defaults():
    cfg = ExperimentConfig.from_dict({"experiment": "last_iterate_noiseless",
                                      "problem": {"dimension": 8},
                                      "iterations": 500,
                                      "repetitions": 2})
    assert cfg.problem.dimension == 8
    assert cfg.problem.decay_exponent == 4.0


def test_config_requires_algorithms_for_custom():
    with pytest.raises(ValueError, match="algorithm"):
        ExperimentConfig.from_dict({"experiment": "custom",
                                    "iterations": 10, "repetitions": 1})


# ---------------------------------------------------------------------------
# Experiment outputs
# ---------------------------------------------------------------------------

def test_csv_schema_and_sorting(tmp_path):
    result = run_experiment(_custom_config(tmp_path))
    lines = open(result.csv_path).read().strip().split("\n")
    assert lines[0] == CSV_HEADER
    rows = [ln.split(",") for ln in lines[1:]]
    keys = [(r[1], int(r[0])) for r in rows]
    assert keys == sorted(keys)
    assert {r[1] for r in rows} == {"acsgd", "sgd"}
    assert all(int(r[6]) == 2 for r in rows)


def test_experiment_rerun_is_byte_identical(tmp_path):
    r1 = run_experiment(_custom_config(tmp_path))
    csv1 = open(r1.csv_path, "rb").read()
    json1 = open(r1.json_path, "rb").read()
    r2 = run_experiment(_custom_config(tmp_path))
    assert open(r2.csv_path, "rb").read() == csv1
    assert open(r2.json_path, "rb").read() == json1


def test_json_summary_round_trips(tmp_path):
    result = run_experiment(_custom_config(tmp_path))
    with open(result.json_path) as fh:
        payload = json.load(fh)
    assert set(payload) >= {"config", "constants", "slopes", "verdicts"}
    redumped = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    assert redumped == open(result.json_path).read()
    assert payload["config"]["experiment"] == "custom"


def test_read_curve_csv_selects_algorithm(tmp_path):
    result = run_experiment(_custom_config(tmp_path))
    ts, risks = read_curve_csv(result.csv_path, "acsgd")
    assert ts[0] == 0
    assert np.all(risks >= 0)
    with pytest.raises(ValueError, match="several"):
        read_curve_csv(result.csv_path)
    with pytest.raises(ValueError, match="not present"):
        read_curve_csv(result.csv_path, "nope")


def test_operator_verify_experiment(tmp_path):
    cfg = ExperimentConfig.from_dict({"experiment": "operator_verify",
                                      "output_dir": str(tmp_path)})
    result = run_experiment(cfg)
    assert result.all_passed
    payload = json.load(open(result.json_path))
    assert "margins" in payload and "d=8" in payload["margins"]


def test_lower_bound_experiment_small():
    report = lower_bound_experiment(6, reps=5, seed=2)
    verdicts = report.verdicts()
    assert all(verdicts.values())
    assert report.max_span_residual <= 1e-10
    # unseen coordinates contribute (d - |seen|) / (2 d^2) exactly
    assert report.min_floor_slack >= -1e-15
    for mean in report.mean_risk_at_half_d.values():
        assert mean >= report.risk_floor * 0.8


def test_lower_bound_via_config(tmp_path):
    cfg = ExperimentConfig.from_dict({"experiment": "lower_bound",
                                      "problem": {"kind": "one_hot",
                                                  "dimension": 8},
                                      "repetitions": 4,
                                      "output_dir": str(tmp_path)})
    result = run_experiment(cfg)
    assert result.all_passed
    payload = json.load(open(result.json_path))
    assert payload["lower_bound"]["risk_floor"] == pytest.approx(1 / 32)


def test_memory_tradeoff_degenerate_dimension():
    # at d = 1 the step sizes coincide, so before machine-precision floors
    # the two memory variants are statistically indistinguishable
    report = memory_tradeoff_experiment(1, iterations=150, reps=5, seed=4,
                                        target_t=20)
    assert 0.2 <= report.iteration_ratio <= 5.0


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------

def _write_config(tmp_path, **overrides):
    cfg = _custom_config(tmp_path, **overrides).to_dict()
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    return path


def test_cli_run_success(tmp_path, capsys):
    path = _write_config(tmp_path)
    rc = cli.main(["run", str(path)])
    out = capsys.readouterr().out
    assert rc == 0
    assert "curves.csv" in out


def test_cli_usage_error_exits_one(capsys):
    assert cli.main(["slope"]) == 1
    assert cli.main(["run", "/nonexistent/config.json"]) == 1


def test_cli_config_error_exits_one(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"experiment": "custom", "bogus": 1}))
    rc = cli.main(["run", str(bad)])
    assert rc == 1
    assert "bogus" in capsys.readouterr().err


def test_cli_failed_verdict_exits_two(tmp_path, capsys):
    # a deliberately divergent run flips the no-divergence verdict
    cfg = {
        "experiment": "custom",
        "problem": {"kind": "gaussian", "dimension": 4,
                    "decay_exponent": 0.0, "noise_std": 0.1, "seed": 3},
        "algorithms": [
            {"name": "wild", "algorithm": "acsgd", "oracle": "sgd",
             "averaging": "last", "alpha": 3.0, "beta": 3.0}],
        "iterations": 5000,
        "repetitions": 2,
        "output_dir": str(tmp_path / "out"),
    }
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    rc = cli.main(["run", str(path)])
    assert rc == 2
    assert "FAIL" in capsys.readouterr().out


def test_cli_seed_override(tmp_path, monkeypatch, capsys):
    path = _write_config(tmp_path)
    monkeypatch.setenv("ACLS_SEED", "77")
    rc = cli.main(["run", str(path), "--output", str(tmp_path / "o2")])
    assert rc == 0
    payload = json.load(open(tmp_path / "o2" / "custom_summary.json"))
    assert payload["config"]["base_seed"] == 77


def test_cli_slope_subcommand(tmp_path, capsys):
    path = _write_config(tmp_path)
    assert cli.main(["run", str(path)]) == 0
    csv_path = str(tmp_path / "out" / "custom_curves.csv")
    rc = cli.main(["slope", csv_path, "--from", "10", "--to", "400",
                   "--algorithm", "acsgd"])
    assert rc == 0
    assert "slope=" in capsys.readouterr().out


def test_cli_verify_operators(capsys):
    rc = cli.main(["verify-operators", "--d", "2", "4"])
    out = capsys.readouterr().out
    assert rc == 0
    assert out.count("PASS") == 2


def test_cli_lower_bound(capsys):
    rc = cli.main(["lower-bound", "--d", "8", "--reps", "3"])
    assert rc == 0
    assert "PASS" in capsys.readouterr().out
