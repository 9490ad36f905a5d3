"""Tests for the forward recursion over joint event states."""

import itertools
import math
from typing import List

import numpy as np
import pytest

from fastuplink.inference import (
    InconsistentObservationError,
    JointStateDistribution,
    Observation,
    emission_likelihood,
    filter_trace,
    forward_update,
    map_states,
    trace_log_likelihood,
)
from fastuplink.models import (
    ContractViolationError,
    ModelParams,
    RngStream,
    event_kernels,
    generate_trajectory,
    joint_states,
    propagate,
    sample_params,
)


def enumerate_paths(params: ModelParams, trace: List[Observation]) -> tuple[np.ndarray, float]:
    """Filtering posterior of the last slot and log p(A_1:T) by summing over every state path."""
    states = joint_states(params.n_events)
    kernels = event_kernels(params.eps0, params.eps1)
    n_joint = states.shape[0]

    def transition(i: int, j: int) -> float:
        return float(
            np.prod([kernels[n, states[i, n], states[j, n]] for n in range(params.n_events)])
        )

    emissions = [
        [emission_likelihood(params, states[j], obs) for j in range(n_joint)] for obs in trace
    ]
    final = np.zeros(n_joint)
    for path in itertools.product(range(n_joint), repeat=len(trace)):
        weight = 1.0
        previous = 0
        for t, j in enumerate(path):
            weight *= transition(previous, j) * emissions[t][j]
            previous = j
        final[path[-1]] += weight
    total = final.sum()
    return final / total, math.log(total)


@pytest.mark.parametrize(
    "n_events, n_devices, horizon",
    [(1, 2, 8), (1, 5, 8), (2, 3, 6), (2, 4, 8), (3, 5, 5)],
)
@pytest.mark.parametrize("seed", range(20))
def test_forward_update_matches_path_enumeration(n_events, n_devices, horizon, seed):
    """Test the recursion against brute-force enumeration of every state path."""
    root = RngStream(seed)
    params = sample_params(n_events, n_devices, 1, rng=root.child("params"))
    trace = generate_trajectory(params, horizon, root).observations()

    dist = JointStateDistribution.point_mass(n_events)
    for obs in trace:
        dist = forward_update(params, dist, obs)
        assert dist.weights.sum() == pytest.approx(1.0, abs=1e-12)

    expected, log_likelihood = enumerate_paths(params, trace)
    np.testing.assert_allclose(dist.weights, expected, atol=1e-9)
    assert dist.log_likelihood == pytest.approx(log_likelihood, abs=1e-9)

    result = filter_trace(params, trace)
    np.testing.assert_allclose(result.posteriors[-1], expected, atol=1e-9)
    assert trace_log_likelihood(params, trace) == pytest.approx(log_likelihood, abs=1e-9)


def test_emission_likelihood_examples():
    """Test the observation likelihood on hand examples."""
    params = ModelParams(1, 2, 1, np.array([0.1]), np.array([0.1]), np.array([[0.5, 0.5]]))
    silent = Observation.full(np.array([0, 0]))
    assert emission_likelihood(params, np.array([0]), silent) == 1.0
    assert emission_likelihood(params, np.array([0]), Observation.full(np.array([1, 0]))) == 0.0
    assert emission_likelihood(
        params, np.array([1]), Observation.full(np.array([1, 0]))
    ) == pytest.approx(0.25)
    masked = Observation.scheduled(np.array([1, 0]), np.array([0, 1]))
    assert emission_likelihood(params, np.array([1]), masked) == pytest.approx(0.5)


def test_uninformative_observation_keeps_uniform_prior():
    """Test the symmetric case with an empty observation mask."""
    params = ModelParams(
        2, 3, 1, np.array([0.5, 0.5]), np.array([0.5, 0.5]), np.full((2, 3), 0.7)
    )
    empty = Observation.scheduled(np.array([1, 0, 1]), np.zeros(3))
    posterior = forward_update(params, JointStateDistribution.uniform(2), empty)
    np.testing.assert_allclose(posterior.weights, np.full(4, 0.25))


def test_empty_mask_is_a_pure_prediction_step(small_params: ModelParams):
    """Test that an unobserved slot only propagates the prior."""
    prior = JointStateDistribution(np.array([0.1, 0.2, 0.3, 0.4]))
    empty = Observation.scheduled(np.ones(6), np.zeros(6))
    posterior = forward_update(small_params, prior, empty)
    np.testing.assert_allclose(
        posterior.weights, propagate(prior.weights, small_params.eps0, small_params.eps1)
    )


def test_impossible_observation_raises():
    """Test that an activation no reachable state can explain is reported."""
    params = ModelParams(1, 2, 1, np.array([0.5]), np.array([0.0]), np.array([[0.5, 0.5]]))
    with pytest.raises(InconsistentObservationError):
        forward_update(
            params,
            JointStateDistribution.point_mass(1),
            Observation.full(np.array([1, 0])),
        )


def test_observation_dimension_checks(small_params: ModelParams):
    """Test the contract checks on observations and priors."""
    with pytest.raises(ContractViolationError):
        forward_update(
            small_params,
            JointStateDistribution.point_mass(2),
            Observation.full(np.zeros(3)),
        )
    with pytest.raises(ContractViolationError):
        forward_update(
            small_params,
            JointStateDistribution.point_mass(3),
            Observation.full(np.zeros(6)),
        )
    with pytest.raises(ContractViolationError):
        Observation.scheduled(np.zeros(3), np.zeros(4))
    with pytest.raises(ContractViolationError):
        JointStateDistribution(np.array([0.5, 0.2, 0.3]))


def test_map_states_follow_the_posterior(small_params: ModelParams, small_trajectory):
    """Test per-slot MAP decoding."""
    trace = small_trajectory.observations()
    result = filter_trace(small_params, trace)
    decoded = map_states(result)
    states = joint_states(2)
    assert len(decoded) == len(trace)
    for row, state in zip(result.posteriors, decoded):
        assert state.tolist() == states[int(np.argmax(row))].tolist()
