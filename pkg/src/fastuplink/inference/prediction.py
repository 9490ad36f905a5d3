"""Next-slot activation prediction from the filtering posterior."""

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from ..models.kernel import joint_activation_probs, joint_states, propagate
from ..models.params import HyperParams
from .filter import JointStateDistribution

EXACT_PATTERN_MAX_DEVICES = 20
_PATTERN_CELLS = 1 << 22


class CapabilityError(RuntimeError):
    """Raised when an exact computation exceeds its size guard."""

    pass


@dataclass
class PredictionResult:
    """Per-device activation likelihood scores and the MAP joint state they came from."""

    per_device: np.ndarray
    map_state: np.ndarray


def most_likely_state(dist: JointStateDistribution) -> np.ndarray:
    """Argmax joint state; ties go to the lowest joint index."""
    return joint_states(dist.n_events)[int(np.argmax(dist.weights))].copy()


def on_probabilities(params: HyperParams, state: np.ndarray) -> np.ndarray:
    """P(S_t+1 = 1 | S_t = state) per event."""
    return np.where(np.asarray(state) == 1, 1.0 - params.eps0, params.eps1)


def noisy_or_scores(on: np.ndarray, q: np.ndarray) -> np.ndarray:
    """1 - prod_n (1 - on_n q_nk) for every device."""
    return 1.0 - np.prod(1.0 - on[:, None] * q, axis=0)


def predict_activation_scores(
    params: HyperParams, dist: JointStateDistribution
) -> PredictionResult:
    """
    Rank devices for the next slot.

    The events are assumed to sit in the MAP joint state; each event's chance of
    being On next slot is combined with q as an independent noisy-OR union.
    """
    map_state = most_likely_state(dist)
    scores = noisy_or_scores(on_probabilities(params, map_state), params.q)
    return PredictionResult(per_device=np.clip(scores, 0.0, 1.0), map_state=map_state)


def most_likely_pattern(
    params: HyperParams,
    dist: JointStateDistribution,
    allow_approximation: bool = True,
) -> np.ndarray:
    """
    Most likely next-slot activation pattern.

    Scores a pattern b by sum_s w(s) prod_k P(A_k = b_k | S_t = s). Exact search
    over all 2^K patterns runs for K <= 20; larger cells fall back to a per-device
    argmax of the mixed marginals (an approximation) unless allow_approximation
    is False, in which case a CapabilityError is raised. Used for validation only.
    """
    weights = dist.normalized()
    # next-step marginal of each device from each current joint state
    step_probs = np.stack(
        [
            propagate(row, params.eps0, params.eps1, transpose=True)
            for row in joint_activation_probs(params.q).T
        ],
        axis=1,
    )
    n_devices = params.n_devices

    if n_devices > EXACT_PATTERN_MAX_DEVICES:
        if not allow_approximation:
            raise CapabilityError(
                f"Exact pattern search supports at most {EXACT_PATTERN_MAX_DEVICES} devices"
            )
        marginals = weights @ step_probs
        return (marginals > 0.5).astype(np.int8)

    with np.errstate(divide="ignore"):
        log_on = np.log(step_probs)
        log_off = np.log1p(-step_probs)
        log_w = np.log(weights)

    best_score = -np.inf
    best_index = 0
    chunk = max(1, _PATTERN_CELLS // (step_probs.shape[0] * n_devices))
    for start in range(0, 1 << n_devices, chunk):
        index = np.arange(start, min(start + chunk, 1 << n_devices))
        bits = ((index[:, None] >> np.arange(n_devices)[None, :]) & 1).astype(bool)
        # (patterns, states) log prod_k P(A_k = b_k | s)
        per_state = np.where(bits[:, None, :], log_on[None, :, :], log_off[None, :, :]).sum(
            axis=2
        )
        with np.errstate(divide="ignore", invalid="ignore"):
            scores = logsumexp(per_state + log_w[None, :], axis=1)
        local = int(np.argmax(scores))
        if scores[local] > best_score:
            best_score = float(scores[local])
            best_index = int(index[local])

    return ((best_index >> np.arange(n_devices)) & 1).astype(np.int8)
