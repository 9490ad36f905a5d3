"""Bayesian filtering over joint event states and next-slot activation prediction."""

from .filter import (
    FilterResult,
    InconsistentObservationError,
    JointStateDistribution,
    Observation,
    ObservationKind,
    ObservationTrace,
    emission_likelihood,
    filter_trace,
    forward_update,
    log_emissions,
    map_states,
    stack_trace,
    trace_log_likelihood,
)
from .prediction import (
    CapabilityError,
    PredictionResult,
    most_likely_pattern,
    most_likely_state,
    noisy_or_scores,
    on_probabilities,
    predict_activation_scores,
)

__all__ = [
    "CapabilityError",
    "FilterResult",
    "InconsistentObservationError",
    "JointStateDistribution",
    "Observation",
    "ObservationKind",
    "ObservationTrace",
    "PredictionResult",
    "emission_likelihood",
    "filter_trace",
    "forward_update",
    "log_emissions",
    "map_states",
    "most_likely_pattern",
    "most_likely_state",
    "noisy_or_scores",
    "on_probabilities",
    "predict_activation_scores",
    "stack_trace",
    "trace_log_likelihood",
]
