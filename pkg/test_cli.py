"""
Tests for the command-line interface.
"""

import csv
import io
import json

import pytest

from seesaw.__main__ import cli, main
from seesaw.estimation.history import export_records
from seesaw.models.regimes import SymmetricNormalModel
from seesaw.simulation.synthetic import synthesize_history

SYM = ["--mu", "-1", "--sigma", "1", "--rho", "0"]


def run_json(capsys, argv):
    code = main(argv + ["--format", "json"])
    captured = capsys.readouterr()
    assert code == 0, captured.err
    return json.loads(captured.out)


# ---------------------------------------------------------------------------
# eval / region / optimize
# ---------------------------------------------------------------------------

def test_eval_symmetric(capsys):
    payload = run_json(capsys, ["eval", *SYM, "--z", "0"])
    assert payload["value"] == pytest.approx(-0.07534, abs=1e-5)
    assert payload["regime"] == "sym"
    assert payload["parameters"]["z"] == 0.0
    assert payload["parameters"]["relaxed"] is False


def test_eval_at_optimal_hurdle(capsys):
    payload = run_json(capsys, ["eval", *SYM, "--z", "1"])
    assert payload["value"] == pytest.approx(0.00849, abs=1e-5)


def test_eval_asymmetric_scalar_hurdle_applies_to_both(capsys):
    argv = ["eval", "--regime", "asym", "--mu-u", "-1", "--mu-v", "-2", "--sigma-u", "1",
            "--sigma-v", "2", "--rho", "-0.3", "--z", "0.5"]
    payload = run_json(capsys, argv)
    assert payload["parameters"]["z_u"] == 0.5
    assert payload["parameters"]["z_v"] == 0.5


def test_missing_parameter_exits_with_validation_code(capsys):
    code = main(["eval", "--mu", "-1", "--rho", "0"])
    captured = capsys.readouterr()
    assert code == 2
    assert "sigma > 0" in captured.err
    assert captured.out == ""


def test_every_violation_is_logged(capsys):
    code = main(["eval", "--mu", "1", "--sigma", "-1", "--rho", "2"])
    err = capsys.readouterr().err
    assert code == 2
    for tag in ("negative-means", "positive-scale", "correlation-range"):
        assert tag in err


def test_pair_hurdle_rejected_outside_asymmetric_regime(capsys):
    code = main(["eval", *SYM, "--z-u", "1", "--z-v", "1"])
    assert code == 2
    assert "asym regime only" in capsys.readouterr().err


def test_relaxed_flag(capsys):
    argv = ["eval", "--regime", "asym", "--mu-u", "0.5", "--mu-v", "-2", "--sigma-u", "1",
            "--sigma-v", "1", "--rho", "0"]
    assert main(argv) == 2
    capsys.readouterr()
    payload = run_json(capsys, argv + ["--relaxed"])
    assert payload["parameters"]["relaxed"] is True


def test_region_json(capsys):
    payload = run_json(capsys, ["region", *SYM])
    assert payload["rho_threshold"] == pytest.approx(0.31136, abs=1e-5)
    assert payload["predicted"] is True


def test_region_table(capsys):
    assert main(["region", "--regime", "multi", "--n", "3", "--mu", "-1", "--sigma", "1", "--rho", "0",
                 "--format", "table"]) == 0
    out = capsys.readouterr().out
    assert "Seesaw region check" in out
    assert "rho_threshold" in out


def test_region_student_t(capsys):
    payload = run_json(capsys, ["region", "--regime", "t", *SYM, "--delta", "5"])
    assert payload["rho_threshold"] == pytest.approx(0.10228, abs=1e-5)


def test_optimize_with_cross_check(capsys):
    payload = run_json(capsys, ["optimize", *SYM, "--cross-check"])
    assert payload["z_star"] == pytest.approx(1.0)
    assert payload["gap"] < 1e-6


def test_optimize_outside_hypothesis(capsys):
    code = main(["optimize", "--mu", "-1", "--sigma", "1", "--rho", "1"])
    assert code == 2
    assert "open-correlation-interval" in capsys.readouterr().err


def test_flags_for_other_regimes_are_ignored(capsys):
    payload = run_json(capsys, ["optimize", *SYM, "--delta", "5"])
    assert payload["regime"] == "sym"
    assert "delta" not in payload["parameters"]


# ---------------------------------------------------------------------------
# Model files
# ---------------------------------------------------------------------------

def test_model_file_with_flag_override(tmp_path, capsys):
    model_file = tmp_path / "model.ini"
    model_file.write_text("[sym]\nmu = -1\nsigma = 1\nrho = 0\nz = 1\n")

    payload = run_json(capsys, ["eval", "--config", str(model_file)])
    assert payload["value"] == pytest.approx(0.00849, abs=1e-5)

    payload = run_json(capsys, ["eval", "--config", str(model_file), "--rho", "0.5"])
    assert payload["parameters"]["rho"] == 0.5
    assert payload["value"] > 0.03


def test_model_file_regime_from_header(tmp_path, capsys):
    model_file = tmp_path / "multi.ini"
    model_file.write_text("[multi]\nn = 4\nmu = -1\nsigma = 1\nrho = 0\npriority_probs = 0.1, 0.2, 0.3, 0.4\n")
    payload = run_json(capsys, ["optimize", "--config", str(model_file)])
    assert payload["regime"] == "multi"
    assert payload["z_star"] == pytest.approx(3.0)
    assert payload["parameters"]["priority_probs"] == [0.1, 0.2, 0.3, 0.4]


def test_model_file_unknown_regime(tmp_path, capsys):
    model_file = tmp_path / "bad.ini"
    model_file.write_text("[cauchy]\nmu = -1\n")
    assert main(["eval", "--config", str(model_file)]) == 2
    assert "unknown regime" in capsys.readouterr().err


def test_model_file_missing(tmp_path, capsys):
    assert main(["eval", "--config", str(tmp_path / "absent.ini")]) == 3


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

def test_simulate_is_deterministic(capsys):
    argv = ["simulate", *SYM, "--z", "1", "--horizon", "20000", "--seed", "11"]
    first = run_json(capsys, argv)
    second = run_json(capsys, argv)
    assert first == second
    assert first["parameters"]["generator"] == "Philox4x64-10"
    assert abs(first["mean_per_period"] - first["closed_form"]) <= 5 * first["std_error"]


def test_simulate_batch_rows(capsys):
    payload = run_json(capsys, ["simulate", *SYM, "--horizon", "5000", "--batch", "4", "--seed", "3"])
    assert payload["batch"] == 4
    assert [row["replication"] for row in payload["rows"]] == [0, 1, 2, 3]


def test_simulate_trajectory(tmp_path, capsys):
    path = tmp_path / "traj.csv"
    payload = run_json(capsys, ["simulate", *SYM, "--horizon", "300", "--seed", "3", "--trajectory", str(path)])
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["t", "U_t", "V_t", "adopted"]
    assert len(rows) == 301
    assert sum(int(r[3]) for r in rows[1:]) == payload["adoption_count"]


def test_simulate_convergence_report(capsys):
    payload = run_json(capsys, ["simulate", *SYM, "--horizon", "10000", "--checkpoints", "100,1000,10000"])
    assert [row["periods"] for row in payload["rows"]] == [100, 1000, 10000]


def test_simulate_csv_output_file(tmp_path, capsys):
    out = tmp_path / "results" / "sim.csv"
    assert main(["simulate", *SYM, "--horizon", "1000", "--format", "csv", "--out", str(out)]) == 0
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert len(rows) == 1
    assert "mean_per_period" in rows[0]


def test_simulate_bad_horizon(capsys):
    assert main(["simulate", *SYM, "--horizon", "-5"]) == 2


@pytest.mark.parametrize("flag", ["--horizon", "--batch", "--workers"])
def test_simulate_zero_counts_are_rejected(flag, capsys):
    assert main(["simulate", *SYM, flag, "0"]) == 2
    err = capsys.readouterr().err
    assert "must be at least 1" in err


# ---------------------------------------------------------------------------
# figure2
# ---------------------------------------------------------------------------

def test_figure2_default_grid_is_csv(capsys):
    assert main(["figure2"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert list(rows[0].keys()) == ["alpha", "delta", "threshold"]
    assert len(rows) == 60 * 6
    normal = [r for r in rows if r["delta"] == "inf"]
    assert len(normal) == 60
    at_one = next(r for r in normal if float(r["alpha"]) == 1.0)
    assert float(at_one["threshold"]) == pytest.approx(0.31136, abs=1e-5)


def test_figure2_custom_grid(capsys):
    assert main(["figure2", "--alpha-start", "0.5", "--alpha-stop", "1.5", "--alpha-step", "0.5",
                 "--deltas", "5"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert len(rows) == 6
    assert float(rows[1]["threshold"]) == pytest.approx(0.10228, abs=1e-5)


def test_figure2_rejects_small_delta(capsys):
    assert main(["figure2", "--deltas", "2"]) == 2


@pytest.mark.parametrize("grid", [
    ["--alpha-step", "0"],
    ["--alpha-step", "-0.5"],
    ["--alpha-start", "2", "--alpha-stop", "1"],
])
def test_figure2_rejects_bad_alpha_grid(grid, capsys):
    assert main(["figure2", *grid]) == 2
    assert capsys.readouterr().out == ""


def test_figure2_far_tail_with_huge_delta(capsys):
    assert main(["figure2", "--alpha-start", "38", "--alpha-stop", "40", "--alpha-step", "1",
                 "--deltas", "1000000000"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert len(rows) == 6
    t_rows, normal_rows = rows[:3], rows[3:]
    for t_row, normal_row in zip(t_rows, normal_rows):
        assert 0.0 < float(t_row["threshold"]) < 1.0
        assert float(t_row["threshold"]) == pytest.approx(float(normal_row["threshold"]), abs=1e-6)


# ---------------------------------------------------------------------------
# recommend
# ---------------------------------------------------------------------------

def test_recommend_from_history(tmp_path, capsys):
    path = tmp_path / "history.csv"
    export_records(synthesize_history(SymmetricNormalModel(mu=-1.0, sigma=1.0, rho=0.0), 20_000, seed=5), path)
    assert main(["recommend", str(path)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["z_star"] == pytest.approx(1.0, abs=0.1)
    assert payload["estimates"]["n_records"] == 20_000
    assert payload["parameters"]["csv_path"] == str(path)
    assert payload["caveats"]


def test_recommend_reports_skipped_rows(tmp_path, capsys):
    path = tmp_path / "history.csv"
    export_records(synthesize_history(SymmetricNormalModel(mu=-1.0, sigma=1.0, rho=0.0), 500, seed=5), path)
    with open(path, "a") as f:
        f.write("BAD,x,1.0,,\n")
    assert main(["recommend", str(path)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["skipped_rows"] == ["line 502: primary_dim must be one of ('u', 'v'), got 'x'"]


def test_recommend_refusal(tmp_path, capsys):
    path = tmp_path / "history.csv"
    path.write_text("test_id,primary_dim,primary_effect\nA,u,-1.0\nB,v,-2.0\n")
    assert main(["recommend", str(path)]) == 2
    assert "rho not estimable" in capsys.readouterr().err


def test_recommend_missing_header(tmp_path, capsys):
    path = tmp_path / "history.csv"
    path.write_text("")
    assert main(["recommend", str(path)]) == 2


def test_recommend_missing_file(tmp_path, capsys):
    assert main(["recommend", str(tmp_path / "absent.csv")]) == 3
    assert "I/O failure" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# Exit codes
# ---------------------------------------------------------------------------

def test_write_failure_exits_with_io_code(mocker, capsys):
    mocker.patch("seesaw.__main__.ResultExporter.export", side_effect=OSError("disk full"))
    assert main(["eval", *SYM]) == 3


def test_cli_maps_interrupt(mocker):
    mocker.patch("seesaw.__main__.main", side_effect=KeyboardInterrupt)
    with pytest.raises(SystemExit) as exc_info:
        cli()
    assert exc_info.value.code == 130


def test_cli_maps_unexpected_error(mocker):
    mocker.patch("seesaw.__main__.main", side_effect=RuntimeError("boom"))
    with pytest.raises(SystemExit) as exc_info:
        cli()
    assert exc_info.value.code == 1


def test_cli_passes_exit_code(mocker):
    mocker.patch("seesaw.__main__.main", return_value=2)
    with pytest.raises(SystemExit) as exc_info:
        cli()
    assert exc_info.value.code == 2
