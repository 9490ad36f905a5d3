"""Filtering and prediction tests."""
