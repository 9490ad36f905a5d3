"""Hyperparameter estimation: q likelihood maximization, Baum-Welch transitions, EM loop."""

from .baum_welch import Smoothing, baum_welch_epsilon, expected_transitions, forward_backward
from .em import em_iterate, em_step, parameter_change
from .golden import golden_section_max, golden_section_min
from .params import EstimatedParams, InsufficientDataError, clamp
from .q_search import (
    estimate_q_all,
    estimate_q_ml,
    estimate_q_soft,
    maximize_q,
    noisy_or_log_likelihood,
)

__all__ = [
    "EstimatedParams",
    "InsufficientDataError",
    "Smoothing",
    "baum_welch_epsilon",
    "clamp",
    "em_iterate",
    "em_step",
    "estimate_q_all",
    "estimate_q_ml",
    "estimate_q_soft",
    "expected_transitions",
    "forward_backward",
    "golden_section_max",
    "golden_section_min",
    "maximize_q",
    "noisy_or_log_likelihood",
    "parameter_change",
]
