"""Tests for allocation counts, regret, usage and cost."""

import numpy as np
import pytest

from fastuplink.metrics import (
    MetricsTrace,
    cost,
    missed_allocations,
    regret_slot,
    system_usage,
    wrong_allocations,
)
from fastuplink.models import ContractViolationError


def test_wrong_allocations():
    """Test granted resources that carried nothing."""
    assert wrong_allocations(np.array([1, 1, 0]), np.array([1, 1, 1])) == 0
    assert wrong_allocations(np.array([1, 1, 0, 0]), np.zeros(4)) == 2
    assert wrong_allocations(np.array([1, 1, 0]), np.array([0, 1, 1])) == 1


def test_wrong_allocations_with_resources():
    """Test that unused resources count as wrong when only successes are marked."""
    successes = np.array([1, 0, 0, 0])
    truth = np.array([1, 1, 1, 0])
    assert wrong_allocations(successes, truth, resources=3) == 2
    assert wrong_allocations(np.zeros(4), np.zeros(4), resources=3) == 3


def test_missed_allocations():
    """Test active devices left without a resource."""
    assert missed_allocations(np.array([1, 1, 0]), np.array([1, 1, 0])) == 0
    assert missed_allocations(np.array([1, 1, 0]), np.array([0, 1, 1])) == 1
    # more active devices than grants, every grant used
    grants = np.array([1, 1, 0, 0])
    truth = np.ones(4)
    assert wrong_allocations(grants, truth) == 0
    assert missed_allocations(grants, truth) == 2
    assert regret_slot(0, 2) == 0


def test_length_mismatch():
    """Test the equal-length precondition."""
    with pytest.raises(ContractViolationError):
        wrong_allocations(np.ones(3), np.ones(4))


def test_regret_slot():
    """Test regret as the smaller of the two counts."""
    assert regret_slot(10, 0) == 0
    assert regret_slot(10 - 3, 3) == 3
    assert regret_slot(3, 3) == 3
    with pytest.raises(ContractViolationError):
        regret_slot(-1, 2)


def test_system_usage():
    """Test the used fraction of resources."""
    assert system_usage([0, 0, 0], 10, 3) == 1.0
    assert system_usage([10, 10], 10, 2) == 0.0
    assert system_usage([2, 4], 10, 2) == pytest.approx(0.7)
    assert system_usage([2, 4, 10], 10, 2) == pytest.approx(0.7)
    with pytest.raises(ContractViolationError):
        system_usage([2], 10, 0)
    with pytest.raises(ContractViolationError):
        system_usage([2], 10, 2)


def test_usage_from_a_trace():
    """Test usage read from recorded slots."""
    trace = MetricsTrace(n_devices=12, n_slots=10)
    grants = np.zeros(12, dtype=np.int8)
    grants[:10] = 1
    truth = np.zeros(12, dtype=np.int8)
    truth[:8] = 1
    trace.record(grants, truth)
    truth[6:8] = 0
    trace.record(grants, truth)
    assert trace.omegas == [2, 4]
    assert system_usage(trace, 10, 2) == pytest.approx(0.7)
    assert trace.final_usage == pytest.approx(0.7)


def test_cost():
    """Test the regret/age product."""
    assert cost(0.0, 5.0) == 0.0
    assert cost(2.0, 3.0) == 6.0
    with pytest.raises(ContractViolationError):
        cost(-1.0, 3.0)
