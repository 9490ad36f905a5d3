"""Metric tests."""
