"""Hyperparameter estimation tests."""
