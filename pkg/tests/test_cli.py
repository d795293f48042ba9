import json
import math

import pytest

from ngt.cli import main
from ngt.errors import ConfigError
from ngt.experiments import EXPERIMENTS, THRESHOLDS, parse_config, run


def _report(out):
    return json.loads((out / "report.json").read_text())


def test_counterexample_default_run(tmp_path, capsys):
    assert main(["run", "--experiment", "counterexample", "--out", str(tmp_path)]) == 0
    rep = _report(tmp_path)
    assert rep["schema_version"] == 1 and rep["passed"]
    d, r = rep["results"]["points"][1]["arg_double"], rep["results"]["points"][1]["arg_direct"]
    assert abs(d - 11 * math.pi / 16) < 1e-12 and abs(r + 5 * math.pi / 16) < 1e-12
    assert rep["thresholds"]["counterexample_tol"] == THRESHOLDS["counterexample_tol"]
    assert "PASS" in capsys.readouterr().out


def test_unknown_experiment_exit_2(tmp_path, capsys):
    assert main(["run", "--experiment", "nope", "--out", str(tmp_path)]) == 2
    assert "unknown experiment" in capsys.readouterr().err


def test_unknown_key_exit_2(tmp_path):
    assert main(["run", "--experiment", "counterexample", "--set", "lamda=2", "--out", str(tmp_path)]) == 2


def test_negative_n_points_is_type_error(tmp_path):
    with pytest.raises(ConfigError):
        parse_config(None, {"n_points": "-5"}, "semigroup_sweep")
    assert main(["run", "--experiment", "semigroup_sweep", "--set", "n_points=-5", "--out", str(tmp_path)]) == 2


def test_bad_override_syntax_exit_2(tmp_path):
    assert main(["run", "--experiment", "counterexample", "--set", "lambda", "--out", str(tmp_path)]) == 2


def test_missing_config_file_exit_2(tmp_path):
    assert main(["run", "--config", str(tmp_path / "none.cfg"), "--out", str(tmp_path)]) == 2


def test_failed_check_exit_1(tmp_path):
    # a real gamma_c cannot witness broken Hermiticity
    code = main(["run", "--experiment", "hermiticity", "--set", "gamma_imag=0", "--out", str(tmp_path)])
    assert code == 1
    assert _report(tmp_path)["passed"] is False


def test_minimal_config_is_fully_defaulted(tmp_path):
    cfg_file = tmp_path / "c.cfg"
    cfg_file.write_text("# just the name\nexperiment = counterexample\n")
    cfg = parse_config(cfg_file)
    assert cfg.parameters == {"lambda": 1.5, "arg1": math.pi / 4, "arg2": 3 * math.pi / 4}


def test_flag_overrides_file(tmp_path):
    cfg_file = tmp_path / "c.cfg"
    cfg_file.write_text("experiment = counterexample\nlambda = 2.5\n")
    assert parse_config(cfg_file).value("lambda") == 2.5
    assert parse_config(cfg_file, {"lambda": "2"}).value("lambda") == 2.0


def test_file_keys_checked_against_flag_experiment(tmp_path):
    cfg_file = tmp_path / "c.cfg"
    cfg_file.write_text("lambda = 2.5\n")
    with pytest.raises(ConfigError):
        parse_config(cfg_file, {}, "hydro_group")


def test_deterministic_report(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert main(["run", "--experiment", "semigroup_sweep", "--set", "trials=10",
                     "--set", "n_fields=3", "--set", "seed=5", "--out", str(out)]) == 0
    ra, rb = _report(a), _report(b)
    ra.pop("timestamp"), rb.pop("timestamp")
    assert ra == rb


def test_seed_changes_draws():
    r1 = run(parse_config(None, {"trials": "5", "seed": "1"}, "hydro_group"), "t")
    r2 = run(parse_config(None, {"trials": "5", "seed": "2"}, "hydro_group"), "t")
    assert r1["passed"] and r2["passed"]
    assert r1["results"] != r2["results"]


@pytest.mark.parametrize("name", ["semigroup_sweep", "hydro_group", "convexity", "hermiticity",
                                  "density_diagonal"])
def test_every_cheap_experiment_passes(name, tmp_path):
    assert main(["run", "--experiment", name, "--out", str(tmp_path)]) == 0


def test_gauge_equivalence_small_run(tmp_path):
    args = ["run", "--experiment", "gauge_equivalence", "--set", "potentials=free",
            "--set", "gamma0=1", "--set", "gamma_rate=0.3", "--set", "steps=200",
            "--set", "dt=1e-3", "--out", str(tmp_path)]
    assert main(args) == 0
    rep = _report(tmp_path)
    (case,) = rep["results"]["cases"]
    assert 3 <= case["refinement_ratios"][0] <= 5
    assert (tmp_path / "residual_free_g1_r0.3_L0.csv").exists()


def test_gauge_equivalence_coarse_grid_fails_threshold(tmp_path):
    args = ["run", "--experiment", "gauge_equivalence", "--set", "potentials=free",
            "--set", "gamma0=1", "--set", "gamma_rate=0", "--set", "n_points=128",
            "--set", "steps=100", "--set", "dt=1e-3", "--out", str(tmp_path)]
    assert main(args) == 1


def test_list_and_help(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    for name in EXPERIMENTS:
        assert name in out
    with pytest.raises(SystemExit) as exc:
        main(["run", "--help"])
    assert exc.value.code == 0
    helptext = capsys.readouterr().out
    assert "gamma_rate" in helptext and "precedence" in helptext
