"""Generative model of the cell: hidden Markov events, device activations, closed-form laws."""

from .dynamics import (
    activation_prob_given_state,
    activation_probs,
    next_step_activation_prob,
    next_step_activation_probs,
    sample_activations,
    steady_state_activation_probs,
    steady_state_on,
    steady_state_prob,
    step_events,
)
from .kernel import (
    event_kernels,
    joint_activation_probs,
    joint_states,
    propagate,
    state_index,
)
from .params import (
    ContractViolationError,
    HyperParams,
    ModelParams,
    UndefinedSteadyStateError,
    initial_state,
    sample_params,
)
from .rng import RngStream
from .trajectory import Trajectory, generate_trajectory

__all__ = [
    "ContractViolationError",
    "HyperParams",
    "ModelParams",
    "RngStream",
    "Trajectory",
    "UndefinedSteadyStateError",
    "activation_prob_given_state",
    "activation_probs",
    "event_kernels",
    "generate_trajectory",
    "initial_state",
    "joint_activation_probs",
    "joint_states",
    "next_step_activation_prob",
    "next_step_activation_probs",
    "propagate",
    "state_index",
    "sample_activations",
    "sample_params",
    "steady_state_activation_probs",
    "steady_state_on",
    "steady_state_prob",
    "step_events",
]
