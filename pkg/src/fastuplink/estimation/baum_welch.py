"""Forward-backward smoothing and the Baum-Welch transition update."""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..inference.filter import (
    InconsistentObservationError,
    ObservationTrace,
    log_emissions,
    stack_trace,
)
from ..models.kernel import event_axis, event_kernels, joint_states, propagate
from ..models.params import HyperParams
from .params import InsufficientDataError, clamp

_MIN_OCCUPANCY = 1e-300


@dataclass
class Smoothing:
    """
    Scaled forward-backward quantities for slots 0..T (slot 0 is the known all-Off start).

    alphas[t] is p(S_t | A_1:t), betas[t] the matching scaled backward message,
    emissions[t] the shifted emission weights of slot t and scales[t] their
    normalizer, so that sum_j alphas[t-1] P g_t = scales[t].
    """

    alphas: np.ndarray
    betas: np.ndarray
    emissions: np.ndarray
    scales: np.ndarray
    log_likelihood: float

    @property
    def posteriors(self) -> np.ndarray:
        """Smoothed p(S_t | A_1:T) for t = 1..T, shape (T, 2^N)."""
        gamma = self.alphas[1:] * self.betas[1:]
        return gamma / gamma.sum(axis=1, keepdims=True)


def forward_backward(params: HyperParams, trace: ObservationTrace) -> Smoothing:
    """Scaled forward and backward passes over the joint state space."""
    activations, masks = stack_trace(trace)
    n_slots = len(trace)
    n_joint = joint_states(params.n_events).shape[0]
    log_e = log_emissions(params.q, activations, masks)

    alphas = np.zeros((n_slots + 1, n_joint))
    alphas[0, 0] = 1.0
    emissions = np.zeros((n_slots + 1, n_joint))
    scales = np.ones(n_slots + 1)
    log_likelihood = 0.0
    for t in range(1, n_slots + 1):
        predicted = propagate(alphas[t - 1], params.eps0, params.eps1)
        row = log_e[t - 1]
        support = (predicted > 0.0) & np.isfinite(row)
        if not np.any(support):
            raise InconsistentObservationError(f"Slot {t} is impossible under the estimates")
        shift = float(np.max(row[support]))
        finite = np.isfinite(row)
        emissions[t] = np.where(finite, np.exp(np.where(finite, row, 0.0) - shift), 0.0)
        unnormalized = predicted * emissions[t]
        scales[t] = unnormalized.sum()
        alphas[t] = unnormalized / scales[t]
        log_likelihood += float(np.log(scales[t])) + shift

    betas = np.ones((n_slots + 1, n_joint))
    for t in range(n_slots - 1, -1, -1):
        betas[t] = propagate(
            emissions[t + 1] * betas[t + 1], params.eps0, params.eps1, transpose=True
        ) / scales[t + 1]
    return Smoothing(alphas, betas, emissions, scales, log_likelihood)


def expected_transitions(params: HyperParams, smoothing: Smoothing) -> np.ndarray:
    """
    Expected per-event transition counts, shape (N, 2, 2).

    counts[n, a, b] = sum_t E[S_t^n = a, S_t+1^n = b | A_1:T] over t = 0..T-1.
    """
    n_events = params.n_events
    kernels = event_kernels(params.eps0, params.eps1)
    backward = smoothing.emissions[1:] * smoothing.betas[1:] / smoothing.scales[1:, None]
    forward = smoothing.alphas[:-1]
    n_pairs = forward.shape[0]
    shape = (n_pairs,) + (2,) * n_events

    counts = np.zeros((n_events, 2, 2))
    for n in range(n_events):
        # every event but n moved to slot t+1; event n still at slot t
        moved = propagate(forward, params.eps0, params.eps1, skip=n).reshape(shape)
        target = backward.reshape(shape)
        axis = 1 + event_axis(n, n_events)
        for a in (0, 1):
            for b in (0, 1):
                overlap = np.take(moved, a, axis=axis) * np.take(target, b, axis=axis)
                counts[n, a, b] = kernels[n, a, b] * float(overlap.sum())
    return counts


def baum_welch_epsilon(
    trace: ObservationTrace,
    params_hat: HyperParams,
    floor: Optional[float] = None,
    smoothing: Optional[Smoothing] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    One Baum-Welch update of the transition probabilities.

    eps0 = E[#(1 -> 0)] / E[#visits to 1] and eps1 = E[#(0 -> 1)] / E[#visits to 0],
    visits counted over the slots that have a successor. An event state with zero
    expected occupancy keeps its previous estimate.
    """
    if len(trace) < 2:
        raise InsufficientDataError(required=2, available=len(trace))
    smoothing = smoothing or forward_backward(params_hat, trace)
    counts = expected_transitions(params_hat, smoothing)
    visits_on = counts[:, 1, :].sum(axis=1)
    visits_off = counts[:, 0, :].sum(axis=1)

    eps0 = np.array(params_hat.eps0, dtype=np.float64)
    eps1 = np.array(params_hat.eps1, dtype=np.float64)
    on_seen = visits_on > _MIN_OCCUPANCY
    off_seen = visits_off > _MIN_OCCUPANCY
    eps0[on_seen] = counts[on_seen, 1, 0] / visits_on[on_seen]
    eps1[off_seen] = counts[off_seen, 0, 1] / visits_off[off_seen]
    return clamp(eps0, floor), clamp(eps1, floor)
