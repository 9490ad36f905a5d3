"""Tests for the activation-probability maximization and golden-section search."""

import numpy as np
import pytest

from fastuplink.estimation import (
    InsufficientDataError,
    estimate_q_all,
    estimate_q_ml,
    golden_section_max,
    golden_section_min,
    noisy_or_log_likelihood,
)
from fastuplink.inference import Observation
from fastuplink.models import ContractViolationError, RngStream, generate_trajectory, sample_params

FLOOR = 1e-4


def single_event_trace(active_slots: int, horizon: int = 100):
    trace = [Observation.full(np.array([1 if t < active_slots else 0])) for t in range(horizon)]
    states = [np.array([1])] * horizon
    return trace, states


def test_bernoulli_fraction():
    """Test that one always-On event recovers the empirical activation rate."""
    trace, states = single_event_trace(37)
    q = estimate_q_ml(trace, states, 0, rng=RngStream(0))
    assert q.shape == (1,)
    assert q[0] == pytest.approx(0.37, abs=0.01)


def test_boundary_maxima():
    """Test that always and never active devices hit the clamped bounds."""
    trace, states = single_event_trace(100)
    assert estimate_q_ml(trace, states, 0)[0] == pytest.approx(1.0 - FLOOR, abs=1e-6)

    trace, states = single_event_trace(0)
    assert estimate_q_ml(trace, states, 0)[0] == pytest.approx(FLOOR, abs=1e-6)


def test_unsupported_event_gets_the_floor():
    """Test that an event never decoded On carries no evidence."""
    trace = [Observation.full(np.array([t % 2, 0])) for t in range(20)]
    states = [np.array([1, 0])] * 20
    q = estimate_q_all(trace, states, rng=RngStream(1))
    assert q[1].tolist() == [FLOOR, FLOOR]
    assert q[0, 0] == pytest.approx(0.5, abs=0.01)


def test_beats_the_grid_oracle():
    """Test the coordinate ascent against a 50-point-per-axis grid for two events."""
    params = sample_params(2, 4, 1, rng=RngStream(13))
    trajectory = generate_trajectory(params, 150, RngStream(14))
    trace = trajectory.observations()
    states = [np.asarray(s) for s in trajectory.events]
    q_hat = estimate_q_all(trace, states, rng=RngStream(15))

    state_rows = trajectory.events.astype(np.float64)
    active = trajectory.activations.astype(np.float64)
    weights = np.ones_like(active)
    estimated = noisy_or_log_likelihood(q_hat, state_rows, active, weights)

    axis = np.linspace(FLOOR, 1.0 - FLOOR, 50)
    a, b = np.meshgrid(axis, axis, indexing="ij")
    grid = np.stack([a.ravel(), b.ravel()], axis=1)[:, :, None].repeat(4, axis=2)
    best_on_grid = noisy_or_log_likelihood(grid, state_rows, active, weights).max(axis=0)
    assert np.all(estimated >= best_on_grid - 1e-6)


def test_q_search_preconditions():
    """Test the empty-trace and bad-argument errors."""
    with pytest.raises(InsufficientDataError):
        estimate_q_ml([], [], 0)
    trace, states = single_event_trace(3, horizon=5)
    with pytest.raises(ContractViolationError):
        estimate_q_ml(trace, states, 1)
    with pytest.raises(ContractViolationError):
        estimate_q_all(trace, states[:4])


def test_golden_section_max_is_vectorized():
    """Test independent brackets maximized in one call."""
    centers = np.array([0.1, 0.5, 0.83])

    def f(x: np.ndarray) -> np.ndarray:
        return -((x - centers) ** 2)

    found = golden_section_max(f, np.zeros(3), np.ones(3))
    np.testing.assert_allclose(found, centers, atol=1e-5)


def test_golden_section_max_returns_exact_bounds():
    """Test that a monotone objective lands on the bracket end."""
    found = golden_section_max(lambda x: x, np.array([0.2]), np.array([0.7]))
    assert found[0] == 0.7


def test_golden_section_min():
    """Test the scalar minimizer with a fixed evaluation budget."""
    calls = []

    def f(x: float) -> float:
        calls.append(x)
        return (x - 0.4) ** 2

    x, value = golden_section_min(f, 0.0, 1.0, max_evals=30)
    assert x == pytest.approx(0.4, abs=1e-3)
    assert value == pytest.approx(0.0, abs=1e-6)
    assert len(calls) == 30
