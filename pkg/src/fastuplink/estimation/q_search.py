"""Maximum-likelihood activation probabilities given decoded event states.

With the event states fixed, each device's column q[:, k] is an independent
maximization of prod_t P(A_t^k | S_t) under the noisy-OR law. We solve it by
projected coordinate ascent, one golden-section search per coordinate on
[floor, 1 - floor], from several starting points, all devices at once.
"""

from typing import Optional, Sequence

import numpy as np

from ..config import get_settings
from ..inference.filter import ObservationTrace, stack_trace
from ..models.params import ContractViolationError
from ..models.rng import RngStream
from .golden import golden_section_max
from .params import InsufficientDataError

settings = get_settings()

_TINY = 1e-300


def noisy_or_log_likelihood(
    q: np.ndarray,
    states: np.ndarray,
    activations: np.ndarray,
    weights: np.ndarray,
) -> np.ndarray:
    """
    Weighted log-likelihood of every device column, shape (..., K).

    q has shape (..., N, K); states (M, N); activations and weights (M, K). Rows
    whose state cannot explain an activation contribute a constant floor.
    """
    log_off = np.log1p(-q)
    silent_log = np.einsum("mn,...nk->...mk", states, log_off)
    p_on = -np.expm1(silent_log)
    rows = activations * np.log(np.maximum(p_on, _TINY)) + (1.0 - activations) * silent_log
    return np.sum(weights * rows, axis=-2)


def maximize_q(
    states: np.ndarray,
    activations: np.ndarray,
    weights: np.ndarray,
    starts: np.ndarray,
    floor: Optional[float] = None,
    max_sweeps: int = 25,
    sweep_tol: float = 1e-5,
) -> np.ndarray:
    """
    Coordinate ascent from every start in starts (R, N, K); returns the best (N, K).

    Coordinates whose event is never On in a weighted row carry no evidence and
    are set to the floor.
    """
    floor = settings.estimation_floor if floor is None else floor
    states = np.asarray(states, dtype=np.float64)
    q = np.clip(np.array(starts, dtype=np.float64), floor, 1.0 - floor)
    n_events = states.shape[1]
    support = (states.T @ weights) > 0.0

    for _ in range(max_sweeps):
        largest_step = 0.0
        for n in range(n_events):
            rows = states[:, n] == 1.0
            if not np.any(rows):
                q[:, n, :] = floor
                continue
            others = states[rows].copy()
            others[:, n] = 0.0
            silent_others = np.exp(np.einsum("mn,rnk->rmk", others, np.log1p(-q)))
            active = activations[rows][None]
            row_weights = weights[rows][None]

            def coordinate_objective(x: np.ndarray) -> np.ndarray:
                stay_silent = (1.0 - x)[:, None, :] * silent_others
                value = active * np.log(np.maximum(1.0 - stay_silent, _TINY)) + (
                    1.0 - active
                ) * np.log1p(-x)[:, None, :]
                return np.sum(row_weights * value, axis=1)

            low = np.full(q[:, n, :].shape, floor)
            updated = golden_section_max(coordinate_objective, low, 1.0 - low)
            updated = np.where(support[n][None, :], updated, floor)
            largest_step = max(largest_step, float(np.max(np.abs(updated - q[:, n, :]))))
            q[:, n, :] = updated
        if largest_step < sweep_tol:
            break

    scores = noisy_or_log_likelihood(q, states, activations, weights)
    best = np.argmax(scores, axis=0)
    return q[best, :, np.arange(q.shape[2])].T


def _restart_points(
    n_events: int,
    n_devices: int,
    restarts: int,
    rng: RngStream,
    warm: Optional[np.ndarray],
    floor: float,
) -> np.ndarray:
    random_starts = rng.uniform(floor, 1.0 - floor, (restarts, n_events, n_devices))
    if warm is None:
        return random_starts
    return np.concatenate([np.asarray(warm, dtype=np.float64)[None], random_starts[1:]])


def estimate_q_all(
    trace: ObservationTrace,
    states: Sequence[np.ndarray],
    rng: Optional[RngStream] = None,
    warm: Optional[np.ndarray] = None,
    restarts: Optional[int] = None,
    floor: Optional[float] = None,
) -> np.ndarray:
    """Hard-decoded q step for every device at once, shape (N, K)."""
    if not trace:
        raise InsufficientDataError(required=1, available=0)
    if len(states) != len(trace):
        raise ContractViolationError(
            f"Need one decoded state per slot: {len(states)} states for {len(trace)} slots"
        )
    floor = settings.estimation_floor if floor is None else floor
    restarts = settings.q_search_restarts if restarts is None else restarts
    rng = rng if rng is not None else RngStream(seed=0, name="q-restarts")
    activations, masks = stack_trace(trace)
    state_rows = np.stack([np.asarray(s, dtype=np.float64) for s in states])
    starts = _restart_points(
        state_rows.shape[1], activations.shape[1], max(1, restarts), rng, warm, floor
    )
    return maximize_q(state_rows, activations, masks, starts, floor)


def estimate_q_soft(
    trace: ObservationTrace,
    posteriors: np.ndarray,
    joint: np.ndarray,
    rng: Optional[RngStream] = None,
    warm: Optional[np.ndarray] = None,
    restarts: Optional[int] = None,
    floor: Optional[float] = None,
) -> np.ndarray:
    """
    Soft q step: every joint state of every slot is a row weighted by its
    smoothed posterior probability.
    """
    floor = settings.estimation_floor if floor is None else floor
    restarts = settings.q_search_restarts if restarts is None else restarts
    rng = rng if rng is not None else RngStream(seed=0, name="q-restarts")
    activations, masks = stack_trace(trace)
    n_slots, n_joint = posteriors.shape
    state_rows = np.tile(joint.astype(np.float64), (n_slots, 1))
    active_rows = np.repeat(activations, n_joint, axis=0)
    weight_rows = np.repeat(masks, n_joint, axis=0) * posteriors.reshape(-1)[:, None]
    starts = _restart_points(
        joint.shape[1], activations.shape[1], max(1, restarts), rng, warm, floor
    )
    return maximize_q(state_rows, active_rows, weight_rows, starts, floor)


def estimate_q_ml(
    trace: ObservationTrace,
    states: Sequence[np.ndarray],
    k: int,
    rng: Optional[RngStream] = None,
    restarts: Optional[int] = None,
    floor: Optional[float] = None,
) -> np.ndarray:
    """Maximum-likelihood q[:, k] for a single device given decoded states."""
    if not trace:
        raise InsufficientDataError(required=1, available=0)
    if not 0 <= k < trace[0].n_devices:
        raise ContractViolationError(f"Device index {k} outside [0, {trace[0].n_devices})")
    q = estimate_q_all(trace, states, rng=rng, restarts=restarts, floor=floor)
    return q[:, k]
