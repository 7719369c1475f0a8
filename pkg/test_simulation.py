"""
Tests for the Monte Carlo engine: agreement with the closed forms,
determinism, degenerate correlations, convergence and trajectory export.
"""

import csv
import io
import math

import numpy as np
import pytest

from seesaw.analysis.closed_form import evaluate
from seesaw.models.regimes import (
    AsymmetricNormalModel,
    EquicorrelatedModel,
    HurdlePolicy,
    StudentTModel,
    SymmetricNormalModel,
)
from seesaw.simulation.engine import (
    BatchResult,
    SimulationConfig,
    SimulationResult,
    convergence_report,
    export_trajectory,
    run,
    run_batch,
    simulate_replication,
)

HORIZON = 1_000_000


def within_three_se(cases, seed):
    hits = 0
    for i, (model, policy) in enumerate(cases):
        result = run(SimulationConfig(model=model, policy=policy, horizon=HORIZON, seed=seed + i))
        expected = evaluate(model, policy).value
        hits += abs(result.mean_per_period - expected) <= 3.0 * result.std_error
    return hits


# ---------------------------------------------------------------------------
# Agreement with the closed forms
# ---------------------------------------------------------------------------

def test_symmetric_suite_matches_closed_form():
    rng = np.random.default_rng(101)
    cases = []
    for _ in range(20):
        model = SymmetricNormalModel(mu=-rng.uniform(0.1, 1.5), sigma=rng.uniform(0.5, 2.0),
                                     rho=rng.uniform(-0.9, 0.9), p_u=rng.uniform(0.1, 0.9))
        cases.append((model, HurdlePolicy.scalar(model.mu + model.sigma * rng.uniform(-1.0, 2.5))))
    assert within_three_se(cases, seed=1000) >= 19


def test_asymmetric_suite_matches_closed_form():
    rng = np.random.default_rng(102)
    cases = []
    for _ in range(20):
        model = AsymmetricNormalModel(
            mu_u=rng.uniform(-2.0, -0.2), mu_v=rng.uniform(-2.0, -0.2),
            sigma_u=rng.uniform(0.5, 2.0), sigma_v=rng.uniform(0.5, 2.0),
            rho=rng.uniform(-0.9, 0.9), p_u=rng.uniform(0.1, 0.9),
        )
        z_u = model.mu_u + model.sigma_u * rng.uniform(-1.0, 2.5)
        z_v = model.mu_v + model.sigma_v * rng.uniform(-1.0, 2.5)
        cases.append((model, HurdlePolicy.pair(z_u, z_v)))
    assert within_three_se(cases, seed=2000) >= 19


def test_multi_suite_matches_closed_form():
    rng = np.random.default_rng(103)
    cases = []
    for _ in range(20):
        n = int(rng.integers(2, 7))
        probs = tuple(float(p) for p in rng.dirichlet(np.ones(n)))
        model = EquicorrelatedModel(n=n, mu=-rng.uniform(0.1, 1.0), sigma=rng.uniform(0.5, 2.0),
                                    rho=rng.uniform(-0.5 / (n - 1), 0.9), priority_probs=probs)
        cases.append((model, HurdlePolicy.scalar(model.mu + model.sigma * rng.uniform(-1.0, 2.5))))
    assert within_three_se(cases, seed=3000) >= 19


def test_student_t_suite_matches_closed_form():
    rng = np.random.default_rng(104)
    cases = []
    for _ in range(20):
        model = StudentTModel(mu=-rng.uniform(0.1, 1.0), sigma=rng.uniform(0.5, 2.0),
                              rho=rng.uniform(-0.9, 0.9), delta=rng.uniform(5.0, 30.0))
        cases.append((model, HurdlePolicy.scalar(model.mu + model.sigma * rng.uniform(-1.0, 2.5))))
    assert within_three_se(cases, seed=4000) >= 19


def test_priority_probability_does_not_move_symmetric_mean():
    runs = []
    for p_u, seed in ((0.1, 61), (0.9, 62)):
        model = SymmetricNormalModel(mu=-1.0, sigma=1.0, rho=0.2, p_u=p_u)
        runs.append(run(SimulationConfig(model=model, policy=HurdlePolicy.scalar(0.5), horizon=HORIZON, seed=seed)))
    low, high = runs
    assert abs(low.mean_per_period - high.mean_per_period) <= 3.0 * math.hypot(low.std_error, high.std_error)


def test_batch_coverage():
    model = SymmetricNormalModel(mu=-1.0, sigma=1.0, rho=0.0)
    policy = HurdlePolicy.scalar(1.0)
    result = run(SimulationConfig(model=model, policy=policy, horizon=100_000, seed=77, batch=32))
    assert isinstance(result, BatchResult)
    assert result.batch == 32

    expected = evaluate(model, policy).value
    inside = sum(abs(r.mean_per_period - expected) <= 2.0 * r.std_error for r in result.replications)
    assert inside >= 28
    assert abs(result.pooled_mean - expected) <= 3.0 * result.pooled_std_error
    assert len({r.mean_per_period for r in result.replications}) == 32


# ---------------------------------------------------------------------------
# Determinism
# ---------------------------------------------------------------------------

def test_identical_configs_give_identical_results(asym_model):
    config = SimulationConfig(model=asym_model, policy=HurdlePolicy.pair(0.5, 1.0), horizon=50_000, seed=5)
    first = simulate_replication(config)
    second = simulate_replication(config)
    assert first.to_dict() == second.to_dict()


def test_batch_results_do_not_depend_on_worker_count(sym_model):
    base = dict(model=sym_model, policy=HurdlePolicy.scalar(0.5), horizon=20_000, seed=8, batch=6)
    serial = run_batch(SimulationConfig(workers=1, **base))
    threaded = run_batch(SimulationConfig(workers=4, **base))
    assert serial.to_dict() == threaded.to_dict()
    assert [r.replication for r in threaded.replications] == list(range(6))


def test_first_replication_matches_single_run(sym_model):
    base = dict(model=sym_model, policy=HurdlePolicy.scalar(0.5), horizon=20_000, seed=8)
    single = run(SimulationConfig(**base))
    batch = run(SimulationConfig(batch=3, **base))
    assert isinstance(single, SimulationResult)
    assert batch.replications[0].to_dict() == single.to_dict()


def test_different_seeds_differ(sym_model):
    a = run(SimulationConfig(model=sym_model, policy=HurdlePolicy.scalar(0.0), horizon=10_000, seed=1))
    b = run(SimulationConfig(model=sym_model, policy=HurdlePolicy.scalar(0.0), horizon=10_000, seed=2))
    assert a.mean_per_period != b.mean_per_period


# ---------------------------------------------------------------------------
# Edge cases
# ---------------------------------------------------------------------------

def test_huge_hurdle_adopts_nothing(sym_model):
    result = run(SimulationConfig(model=sym_model, policy=HurdlePolicy.scalar(-1.0 + 50.0), horizon=100_000, seed=3))
    assert result.adoption_count == 0
    assert result.cumulative == (0.0, 0.0)
    assert result.mean_per_period == 0.0


def test_perfect_positive_correlation_keeps_dimensions_equal():
    model = SymmetricNormalModel(mu=-1.0, sigma=1.0, rho=1.0)
    result = run(SimulationConfig(model=model, policy=HurdlePolicy.scalar(0.0), horizon=50_000, seed=4))
    u_total, v_total = result.cumulative
    assert u_total - v_total == 0.0


def test_perfect_negative_correlation_adopts_constant_sum():
    model = SymmetricNormalModel(mu=-1.0, sigma=1.0, rho=-1.0)
    config = SimulationConfig(model=model, policy=HurdlePolicy.scalar(0.0), horizon=50_000, seed=4, trajectory=True)
    result = simulate_replication(config)
    trajectory = result.trajectory
    assert result.adoption_count > 0
    assert np.allclose(trajectory.contributions[trajectory.adopted], -2.0, atol=1e-12)
    assert np.all(trajectory.contributions[~trajectory.adopted] == 0.0)


def test_cumulative_matches_mean(multi_model):
    result = run(SimulationConfig(model=multi_model, policy=HurdlePolicy.scalar(1.0), horizon=30_000, seed=6))
    assert len(result.cumulative) == 3
    assert sum(result.cumulative) / 30_000 == pytest.approx(result.mean_per_period, rel=1e-12)


def test_chunk_boundaries_are_invisible_to_totals(sym_model):
    config = SimulationConfig(model=sym_model, policy=HurdlePolicy.scalar(0.3), horizon=10_000,
                              seed=12, chunk_size=1_024, trajectory=True)
    result = simulate_replication(config)
    assert result.trajectory.cumulative.shape == (10_000, 2)
    assert result.trajectory.cumulative[-1] == pytest.approx(list(result.cumulative), rel=1e-9)
    assert int(result.trajectory.adopted.sum()) == result.adoption_count


@pytest.mark.parametrize("kwargs", [
    {"horizon": 0},
    {"batch": 0},
    {"workers": 0},
    {"chunk_size": 0},
    {"seed": -1},
    {"policy": HurdlePolicy.pair(0.0, 1.0), "model": EquicorrelatedModel(n=3, mu=-1.0, sigma=1.0, rho=0.0)},
])
def test_config_validation(sym_model, kwargs):
    base = dict(model=sym_model, policy=HurdlePolicy.scalar(0.0), horizon=100, seed=1)
    base.update(kwargs)
    with pytest.raises(ValueError):
        SimulationConfig(**base)


def test_config_echo(t_model):
    payload = SimulationConfig(model=t_model, policy=HurdlePolicy.scalar(1.0), horizon=100, seed=1).to_dict()
    assert payload["regime"] == "t"
    assert payload["z"] == 1.0
    assert payload["generator"] == "Philox4x64-10"
    assert payload["t_scaling"] == "scale"


# ---------------------------------------------------------------------------
# Convergence and trajectories
# ---------------------------------------------------------------------------

def test_standard_error_shrinks_by_root_ten_per_decade(sym_model):
    config = SimulationConfig(model=sym_model, policy=HurdlePolicy.scalar(0.0), horizon=1_000_000, seed=21)
    report = convergence_report(config, [1_000, 10_000, 100_000, 1_000_000])
    assert [p.periods for p in report] == [1_000, 10_000, 100_000, 1_000_000]
    for coarse, fine in zip(report, report[1:]):
        assert coarse.std_error / fine.std_error == pytest.approx(math.sqrt(10.0), rel=0.3)
    expected = evaluate(sym_model, HurdlePolicy.scalar(0.0)).value
    assert abs(report[-1].running_mean - expected) <= 4.0 * report[-1].std_error


def test_convergence_report_matches_full_run(sym_model):
    config = SimulationConfig(model=sym_model, policy=HurdlePolicy.scalar(1.0), horizon=5_000, seed=21)
    report = convergence_report(config, [100, 5_000])
    assert report[-1].running_mean == pytest.approx(simulate_replication(config).mean_per_period, rel=1e-9)


@pytest.mark.parametrize("checkpoints", [[], [1, 10], [100, 100], [200, 100], [100, 10_000]])
def test_convergence_report_rejects_bad_checkpoints(sym_model, checkpoints):
    config = SimulationConfig(model=sym_model, policy=HurdlePolicy.scalar(1.0), horizon=5_000, seed=1)
    with pytest.raises(ValueError):
        convergence_report(config, checkpoints)


def test_export_bivariate_trajectory(sym_model, tmp_path):
    config = SimulationConfig(model=sym_model, policy=HurdlePolicy.scalar(0.0), horizon=500, seed=2, trajectory=True)
    result = simulate_replication(config)
    path = tmp_path / "out" / "trajectory.csv"
    assert export_trajectory(result, path) == 500

    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    assert list(rows[0].keys()) == ["t", "U_t", "V_t", "adopted"]
    assert rows[-1]["t"] == "500"
    assert float(rows[-1]["U_t"]) == pytest.approx(result.cumulative[0], rel=1e-9, abs=1e-12)
    assert float(rows[-1]["V_t"]) == pytest.approx(result.cumulative[1], rel=1e-9, abs=1e-12)
    assert sum(int(r["adopted"]) for r in rows) == result.adoption_count


def test_export_multi_trajectory_to_stream(multi_model):
    config = SimulationConfig(model=multi_model, policy=HurdlePolicy.scalar(0.0), horizon=50, seed=2, trajectory=True)
    buffer = io.StringIO()
    export_trajectory(simulate_replication(config), buffer)
    header = buffer.getvalue().splitlines()[0]
    assert header == "t,X1_t,X2_t,X3_t,adopted"


def test_export_needs_trajectory(sym_model):
    result = simulate_replication(SimulationConfig(model=sym_model, policy=HurdlePolicy.scalar(0.0), horizon=10, seed=2))
    with pytest.raises(ValueError):
        export_trajectory(result, io.StringIO())
