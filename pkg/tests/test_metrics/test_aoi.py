"""Tests for age of information and the per-slot metric records."""

import numpy as np
import pytest

from fastuplink.metrics import SERIES_COLUMNS, MetricsTrace, average_aoi, peak_aoi, update_aoi


def test_update_aoi():
    """Test the reset and increment rules."""
    ages = np.array([3, 4, 2])
    grants = np.array([1, 1, 0])
    truth = np.array([1, 0, 1])
    assert update_aoi(ages, grants, truth).tolist() == [0, 5, 3]


def test_ages_grow_without_transmissions():
    """Test three silent slots."""
    ages = np.zeros(4, dtype=np.int64)
    for _ in range(3):
        ages = update_aoi(ages, np.array([1, 1, 0, 0]), np.zeros(4))
    assert ages.tolist() == [3, 3, 3, 3]


def test_average_and_peak():
    """Test mean and max age."""
    assert average_aoi(np.array([4, 4, 4])) == 4.0
    assert peak_aoi(np.array([4, 4, 4])) == 4
    assert average_aoi(np.array([0, 0, 6])) == pytest.approx(2.0)
    assert peak_aoi(np.array([0, 0, 6])) == 6
    assert average_aoi(np.array([7])) == peak_aoi(np.array([7]))


def test_metrics_trace_records():
    """Test the running totals of a short run."""
    trace = MetricsTrace(n_devices=3, n_slots=1)
    trace.record(np.array([1, 0, 0]), np.array([0, 1, 0]))
    trace.record(np.array([0, 1, 0]), np.array([0, 1, 0]))
    trace.record(np.array([0, 0, 1]), np.array([1, 0, 0]))

    assert len(trace) == 3
    assert trace.regret_series.tolist() == [1, 1, 2]
    assert trace.cumulative_regret == 2
    assert trace.average_regret == pytest.approx(2 / 3)
    assert trace.records[-1].ages.tolist() == [3, 1, 3]
    assert trace.grant_matrix.shape == (3, 3)


def test_series_frame_cross_checks_ages():
    """Test that the aoi_mean column is the mean of each slot's age snapshot."""
    trace = MetricsTrace(n_devices=3, n_slots=1)
    for t in range(5):
        grants = np.zeros(3, dtype=np.int8)
        grants[t % 3] = 1
        trace.record(grants, np.array([1, 0, 1]))

    frame = trace.to_frame()
    assert list(frame.columns) == SERIES_COLUMNS
    assert len(frame) == 5
    for record, (_, row) in zip(trace.records, frame.iterrows()):
        assert row["aoi_mean"] == pytest.approx(average_aoi(record.ages))
        assert row["aoi_peak"] == peak_aoi(record.ages)
    assert trace.mean_aoi == pytest.approx(frame["aoi_mean"].mean())
