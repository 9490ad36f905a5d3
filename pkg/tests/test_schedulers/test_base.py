"""Tests for the priority index, top-L selection and the simple policies."""

import numpy as np
import pytest

from fastuplink.models import ContractViolationError, ModelParams, RngStream
from fastuplink.schedulers import (
    GrantFreeScheduler,
    SchedulerState,
    TdmaScheduler,
    priority_index,
    select_top,
    steady_state_weight,
)


def test_priority_index_hand_example():
    """Test I = score + beta * p_ss * age."""
    index = priority_index(np.array([0.5]), np.array([10]), beta=0.0233, p_ss=0.5)
    assert index[0] == pytest.approx(0.61650)


def test_zero_beta_is_the_score():
    """Test that the age term vanishes at beta = 0."""
    scores = np.array([0.3, 0.9, 0.1])
    np.testing.assert_array_equal(priority_index(scores, np.array([5, 0, 9]), 0.0, 0.7), scores)


def test_negative_beta_is_rejected():
    """Test the beta >= 0 precondition."""
    with pytest.raises(ContractViolationError):
        priority_index(np.ones(3), np.zeros(3), -0.1, 0.5)
    with pytest.raises(ContractViolationError):
        SchedulerState(kind="fu-feedback", n_devices=3, beta=-1.0)


def test_equal_scores_rank_by_age():
    """Test the round-robin limit of the age term."""
    index = priority_index(np.full(4, 0.4), np.array([3, 1, 5, 2]), 1.0, 0.5)
    assert select_top(index, 2).tolist() == [1, 0, 1, 0]


def test_select_top_ties_go_to_lower_device():
    """Test the stable tie-break."""
    assert select_top(np.array([0.2, 0.5, 0.5, 0.5]), 2).tolist() == [0, 1, 1, 0]
    assert select_top(np.array([0.1, 0.2]), 5).sum() == 2


def test_steady_state_weight_modes():
    """Test mean and max aggregation over events."""
    params = ModelParams(
        2, 1, 1, np.array([0.1, 0.25]), np.array([0.4, 0.25]), np.array([[0.5], [0.5]])
    )
    assert steady_state_weight(params, "mean") == pytest.approx(0.65)
    assert steady_state_weight(params, "max") == pytest.approx(0.8)


def test_tdma_cycles_through_devices(rng: RngStream):
    """Test the cyclic grant order."""
    tdma = TdmaScheduler(n_devices=50, n_slots=10)
    assert np.flatnonzero(tdma.schedule(rng)).tolist() == list(range(10))
    assert np.flatnonzero(tdma.schedule(rng)).tolist() == list(range(10, 20))

    small = TdmaScheduler(n_devices=5, n_slots=2)
    orders = [np.flatnonzero(small.schedule(rng)).tolist() for _ in range(3)]
    assert orders == [[0, 1], [2, 3], [0, 4]]


def test_grant_free_single_device_always_succeeds(rng: RngStream):
    """Test that a lone transmitter never collides."""
    gf = GrantFreeScheduler(n_devices=6, n_slots=3)
    truth = np.array([0, 0, 1, 0, 0, 0])
    for _ in range(20):
        assert gf.schedule(rng, truth).tolist() == truth.tolist()


def test_grant_free_two_devices_one_preamble_collide(rng: RngStream):
    """Test that two transmitters on one resource always collide."""
    gf = GrantFreeScheduler(n_devices=4, n_slots=1)
    truth = np.array([1, 0, 1, 0])
    for _ in range(20):
        assert gf.schedule(rng, truth).sum() == 0


def test_grant_free_needs_the_activations(rng: RngStream):
    """Test that device-side access cannot run blind."""
    with pytest.raises(ValueError):
        GrantFreeScheduler(n_devices=4, n_slots=1).schedule(rng)


def test_scheduler_dimension_checks():
    """Test the L <= K and truth-length preconditions."""
    with pytest.raises(ContractViolationError):
        TdmaScheduler(n_devices=2, n_slots=3)
    tdma = TdmaScheduler(n_devices=3, n_slots=1)
    with pytest.raises(ContractViolationError):
        tdma.observe(np.zeros(4), np.zeros(4))


def test_observe_ages_devices(rng: RngStream):
    """Test that the base observation step applies the age rule."""
    tdma = TdmaScheduler(n_devices=3, n_slots=1)
    grants = tdma.schedule(rng)
    tdma.observe(np.array([1, 1, 0]), grants)
    assert tdma.state.ages.tolist() == [0, 1, 1]
