"""Tests for parameter sampling, validation and the random streams."""

import numpy as np
import pytest

from fastuplink.config import get_settings
from fastuplink.models import (
    ContractViolationError,
    ModelParams,
    RngStream,
    generate_trajectory,
    joint_states,
    propagate,
    sample_params,
    state_index,
)
from fastuplink.models.kernel import event_kernels

settings = get_settings()


def test_sample_params_is_deterministic():
    """Test that the same stream gives the same cell."""
    first = sample_params(3, 7, 2, rng=RngStream(5))
    second = sample_params(3, 7, 2, rng=RngStream(5))
    np.testing.assert_array_equal(first.eps0, second.eps0)
    np.testing.assert_array_equal(first.eps1, second.eps1)
    np.testing.assert_array_equal(first.q, second.q)


def test_sample_params_defaults():
    """Test the default cell dimensions."""
    params = sample_params()
    assert (params.n_events, params.n_devices, params.n_slots) == (
        settings.n_events,
        settings.n_devices,
        settings.n_slots,
    )
    assert (params.n_events, params.n_devices, params.n_slots) == (5, 50, 10)


def test_sampled_eps_mean():
    """Test that eps is uniform on [0, 0.5]."""
    params = sample_params(50000, 1, 1, rng=RngStream(9))
    assert params.eps0.mean() == pytest.approx(0.25, abs=0.005)
    assert params.eps1.max() <= 0.5
    assert 0.0 <= params.q.min() and params.q.max() <= 1.0


def test_params_validation():
    """Test the dimension and range preconditions."""
    with pytest.raises(ContractViolationError):
        sample_params(2, 3, 4)
    with pytest.raises(ContractViolationError):
        ModelParams(1, 2, 1, np.array([1.5]), np.array([0.1]), np.zeros((1, 2)))
    with pytest.raises(ContractViolationError):
        ModelParams(1, 2, 1, np.array([0.1]), np.array([0.1]), np.zeros((2, 2)))


def test_params_dict_round_trip():
    """Test that params survive serialization."""
    params = sample_params(2, 3, 1, rng=RngStream(1))
    restored = ModelParams.from_dict(params.to_dict())
    np.testing.assert_array_equal(restored.q, params.q)
    assert restored.n_slots == 1


def test_rng_children_are_independent_and_repeatable():
    """Test named substreams."""
    root = RngStream(42)
    a = root.child("events").random(5)
    again = RngStream(42).child("events").random(5)
    other = root.child("activations").random(5)
    np.testing.assert_array_equal(a, again)
    assert not np.array_equal(a, other)
    assert root.child("events").name == "root/events"


def test_joint_state_layout():
    """Test that bit n of the joint index is event n."""
    states = joint_states(3)
    assert states.shape == (8, 3)
    assert states[1].tolist() == [1, 0, 0]
    for j, bits in enumerate(states):
        assert state_index(bits) == j
    with pytest.raises(ContractViolationError):
        joint_states(17)


def test_propagate_matches_full_transition_matrix():
    """Test the factorized propagation against the dense 2^N x 2^N kernel."""
    params = sample_params(3, 2, 1, rng=RngStream(8))
    kernels = event_kernels(params.eps0, params.eps1)
    states = joint_states(3)
    dense = np.ones((8, 8))
    for i in range(8):
        for j in range(8):
            for n in range(3):
                dense[i, j] *= kernels[n, states[i, n], states[j, n]]
    weights = RngStream(2).random(8)
    np.testing.assert_allclose(propagate(weights, params.eps0, params.eps1), weights @ dense)
    np.testing.assert_allclose(
        propagate(weights, params.eps0, params.eps1, transpose=True), dense @ weights
    )


def test_trajectory_shapes_and_determinism(small_params: ModelParams):
    """Test the shared trajectory generator."""
    first = generate_trajectory(small_params, 25, RngStream(3))
    second = generate_trajectory(small_params, 25, RngStream(3))
    assert len(first) == 25
    assert first.events.shape == (25, 2)
    assert first.activations.shape == (25, 6)
    np.testing.assert_array_equal(first.activations, second.activations)
    assert not first.activations.flags.writeable
    with pytest.raises(ContractViolationError):
        generate_trajectory(small_params, 0, RngStream(3))


def test_trajectory_starts_all_off():
    """Test that events that never turn On produce no activations."""
    params = ModelParams(2, 3, 1, np.array([0.5, 0.5]), np.array([0.0, 0.0]), np.ones((2, 3)))
    trajectory = generate_trajectory(params, 10, RngStream(0))
    assert trajectory.events.sum() == 0
    assert trajectory.activations.sum() == 0
    assert len(trajectory.observations()) == 10


def test_trajectory_from_a_given_start():
    """Test that frozen events keep the start state for the whole run."""
    params = ModelParams(2, 3, 1, np.zeros(2), np.zeros(2), np.ones((2, 3)))
    trajectory = generate_trajectory(params, 6, RngStream(0), start=np.array([1, 0]))
    assert trajectory.events.tolist() == [[1, 0]] * 6
    assert trajectory.activations.tolist() == [[1, 1, 1]] * 6
    with pytest.raises(ContractViolationError):
        generate_trajectory(params, 6, RngStream(0), start=np.array([1, 0, 0]))
