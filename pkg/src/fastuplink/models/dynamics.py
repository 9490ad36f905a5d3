"""Event transitions, device activations and the closed-form probability laws."""

import numpy as np

from .params import ContractViolationError, ModelParams, UndefinedSteadyStateError
from .rng import RngStream


def _as_state(params: ModelParams, s: np.ndarray) -> np.ndarray:
    state = np.asarray(s)
    if state.shape != (params.n_events,):
        raise ContractViolationError(
            f"Event state must have length {params.n_events}, got shape {state.shape}"
        )
    if np.any((state != 0) & (state != 1)):
        raise ContractViolationError("Event state entries must be 0 or 1")
    return state.astype(np.int8)


def _check_device(params: ModelParams, k: int) -> None:
    if not 0 <= k < params.n_devices:
        raise ContractViolationError(f"Device index {k} outside [0, {params.n_devices})")


def step_events(params: ModelParams, s: np.ndarray, rng: RngStream) -> np.ndarray:
    """Advance every event one slot: On goes Off w.p. eps0, Off goes On w.p. eps1."""
    state = _as_state(params, s)
    u = rng.random(params.n_events)
    stays_on = u >= params.eps0
    turns_on = u < params.eps1
    return np.where(state == 1, stays_on, turns_on).astype(np.int8)


def activation_probs(params: ModelParams, s: np.ndarray) -> np.ndarray:
    """P(A_k = 1 | S = s) for all devices: 1 - prod_n (1 - q_nk)^s_n."""
    state = _as_state(params, s)
    silent = np.prod(np.where(state[:, None] == 1, 1.0 - params.q, 1.0), axis=0)
    return 1.0 - silent


def activation_prob_given_state(params: ModelParams, s: np.ndarray, k: int) -> float:
    _check_device(params, k)
    return float(activation_probs(params, s)[k])


def sample_activations(params: ModelParams, s: np.ndarray, rng: RngStream) -> np.ndarray:
    """Draw the activation vector; devices are conditionally independent given s."""
    p = activation_probs(params, s)
    return (rng.random(params.n_devices) < p).astype(np.int8)


def next_step_activation_probs(params: ModelParams, s: np.ndarray) -> np.ndarray:
    """One-step-ahead activation probability of every device given the current state."""
    state = _as_state(params, s)
    eps0 = params.eps0[:, None]
    eps1 = params.eps1[:, None]
    off = 1.0 - params.q
    h = np.where(
        state[:, None] == 0,
        1.0 - eps1 + eps1 * off,
        eps0 + (1.0 - eps0) * off,
    )
    return 1.0 - np.prod(h, axis=0)


def next_step_activation_prob(params: ModelParams, s: np.ndarray, k: int) -> float:
    _check_device(params, k)
    return float(next_step_activation_probs(params, s)[k])


def steady_state_prob(params: ModelParams, n: int, bit: int) -> float:
    """Stationary probability that event n is in state bit."""
    if not 0 <= n < params.n_events:
        raise ContractViolationError(f"Event index {n} outside [0, {params.n_events})")
    if bit not in (0, 1):
        raise ContractViolationError(f"bit must be 0 or 1, got {bit}")
    eps0 = float(params.eps0[n])
    eps1 = float(params.eps1[n])
    total = eps0 + eps1
    if total <= 0.0:
        raise UndefinedSteadyStateError([n])
    return (eps1 if bit == 1 else eps0) / total


def steady_state_on(params: ModelParams) -> np.ndarray:
    """Stationary On probability of every event."""
    params.require_steady_state()
    return params.eps1 / (params.eps0 + params.eps1)


def steady_state_activation_probs(params: ModelParams) -> np.ndarray:
    """
    Stationary activation probability of every device.

    Summing the noisy-OR silence over independent stationary events collapses to
    1 - prod_n (1 - pi_n q_nk).
    """
    on = steady_state_on(params)
    return 1.0 - np.prod(1.0 - on[:, None] * params.q, axis=0)
