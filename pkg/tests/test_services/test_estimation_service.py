"""Tests for offline estimation runs and the regret-based estimation error."""

from pathlib import Path

import numpy as np
import pytest

from fastuplink.estimation import EstimatedParams
from fastuplink.models import (
    ContractViolationError,
    ModelParams,
    RngStream,
    generate_trajectory,
    sample_params,
)
from fastuplink.services import (
    EstimationService,
    estimation_curve,
    estimation_error,
    eval_trajectories,
    load_trace,
    save_trace,
)


def test_true_params_have_zero_error(small_params: ModelParams):
    """Test that scoring the truth against itself gives no error."""
    evals = eval_trajectories(small_params, 2, 15, RngStream(0))
    assert estimation_error(small_params, small_params, evals) == 0.0
    with pytest.raises(ContractViolationError):
        estimation_error(small_params, small_params, [])


def test_error_is_nonnegative(small_params: ModelParams):
    """Test an untrained estimate."""
    evals = eval_trajectories(small_params, 2, 15, RngStream(0))
    guess = EstimatedParams.initial(2, 6, RngStream(1))
    assert estimation_error(small_params, guess, evals) >= 0.0


def test_curve_covers_every_iteration(small_params: ModelParams, small_trajectory):
    """Test one point per iteration, padded after convergence."""
    evals = eval_trajectories(small_params, 1, 10, RngStream(0))
    init = EstimatedParams.initial(2, 6, RngStream(1))
    curve = estimation_curve(
        small_params, small_trajectory.observations(), init, evals, max_iters=3, rng=RngStream(2)
    )
    assert [point.iteration for point in curve] == [0, 1, 2, 3]
    assert all(point.error >= 0.0 for point in curve)
    assert all(np.isfinite(point.log_likelihood) for point in curve)


def test_trace_file_round_trip(small_trajectory, tmp_path: Path):
    """Test the CSV trace format."""
    path = save_trace(small_trajectory, tmp_path / "trace.csv")
    assert path.read_text().splitlines()[0] == ",".join(f"d{k}" for k in range(6))
    trace = load_trace(path)
    assert len(trace) == len(small_trajectory)
    np.testing.assert_array_equal(trace[3].activations, small_trajectory.activations[3])


def test_bad_trace_files(tmp_path: Path):
    """Test that non-binary and empty traces are rejected."""
    bad = tmp_path / "bad.csv"
    bad.write_text("d0,d1\n0,2\n")
    with pytest.raises(ContractViolationError):
        load_trace(bad)
    empty = tmp_path / "empty.csv"
    empty.write_text("d0,d1\n")
    with pytest.raises(ContractViolationError):
        load_trace(empty)


def test_service_estimate(small_params: ModelParams):
    """Test the service wrapper and its seeding."""
    trace = generate_trajectory(small_params, 30, RngStream(8)).observations()
    service = EstimationService(n_events=2, max_iters=2)
    first = service.estimate(trace, seed=1)
    second = service.estimate(trace, seed=1)
    np.testing.assert_array_equal(first.q_hat, second.q_hat)
    assert first.to_dict()["iterations_run"] == first.iterations_run
    with pytest.raises(ContractViolationError):
        service.estimate([])


@pytest.mark.slow
def test_error_falls_over_em_iterations():
    """Test that EM ends below the untrained error on at least 8 of 10 seeds."""
    improved = 0
    for seed in range(10):
        root = RngStream(seed)
        params = sample_params(2, 10, 3, rng=root.child("params"))
        trace = generate_trajectory(params, 300, root.child("trace")).observations()
        evals = eval_trajectories(params, 5, 50, root.child("evals"))
        init = EstimatedParams.initial(2, 10, root.child("init"))
        curve = estimation_curve(params, trace, init, evals, max_iters=40, rng=root.child("em"))
        assert len(curve) == 41
        improved += curve[-1].error < curve[0].error
    assert improved >= 8


@pytest.mark.slow
def test_trained_estimate_beats_an_untrained_guess():
    """Test the paired seed comparison of a random guess against the EM estimate."""
    service = EstimationService(n_events=2, max_iters=40)
    better = 0
    for seed in range(10):
        root = RngStream(100 + seed)
        params = sample_params(2, 10, 3, rng=root.child("params"))
        trace = generate_trajectory(params, 300, root.child("trace")).observations()
        evals = eval_trajectories(params, 5, 50, root.child("evals"))
        guess = EstimatedParams.initial(2, 10, root.child("guess"))
        trained = service.estimate(trace, seed=seed)
        better += estimation_error(params, guess, evals) > estimation_error(params, trained, evals)
    assert better >= 8
