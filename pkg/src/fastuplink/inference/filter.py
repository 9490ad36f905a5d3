"""Exact forward filtering over the 2^N joint event states."""

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence

import numpy as np

from ..models.kernel import joint_activation_probs, joint_states, propagate
from ..models.params import ContractViolationError, HyperParams


class InconsistentObservationError(ValueError):
    """Raised when an observation has zero probability under every joint state."""

    pass


class ObservationKind(str, Enum):
    """What the base station got to see in a slot."""

    FULL = "full"
    SCHEDULED = "scheduled"


@dataclass(frozen=True, eq=False)
class Observation:
    """
    Activations seen in one slot.

    Under SCHEDULED only the bits inside observed_mask carry information; the
    rest are ignored by every likelihood computation.
    """

    kind: ObservationKind
    activations: np.ndarray
    observed_mask: np.ndarray

    @classmethod
    def full(cls, activations: np.ndarray) -> "Observation":
        active = np.asarray(activations, dtype=np.int8)
        return cls(ObservationKind.FULL, active, np.ones_like(active))

    @classmethod
    def scheduled(cls, activations: np.ndarray, grants: np.ndarray) -> "Observation":
        active = np.asarray(activations, dtype=np.int8)
        mask = np.asarray(grants, dtype=np.int8)
        if mask.shape != active.shape:
            raise ContractViolationError("Observation mask and activations differ in length")
        return cls(ObservationKind.SCHEDULED, active * mask, mask)

    @property
    def n_devices(self) -> int:
        return int(self.activations.shape[0])


ObservationTrace = Sequence[Observation]


@dataclass
class JointStateDistribution:
    """
    Filtering weights p(S_t = j, A_1:t) over joint states, kept normalized.

    log_likelihood accumulates log p(A_1:t) from the normalizers.
    """

    weights: np.ndarray
    log_likelihood: float = 0.0

    def __post_init__(self) -> None:
        weights = np.asarray(self.weights, dtype=np.float64)
        if weights.ndim != 1 or weights.size & (weights.size - 1) or weights.size < 2:
            raise ContractViolationError("Weights must be a vector of length 2^N")
        if np.any(weights < 0.0) or not np.any(weights > 0.0):
            raise ContractViolationError("Weights must be nonnegative and not all zero")
        self.weights = weights

    @property
    def n_events(self) -> int:
        return int(self.weights.size).bit_length() - 1

    @classmethod
    def point_mass(cls, n_events: int, index: int = 0) -> "JointStateDistribution":
        weights = np.zeros(joint_states(n_events).shape[0])
        weights[index] = 1.0
        return cls(weights)

    @classmethod
    def uniform(cls, n_events: int) -> "JointStateDistribution":
        size = joint_states(n_events).shape[0]
        return cls(np.full(size, 1.0 / size))

    def normalized(self) -> np.ndarray:
        return self.weights / self.weights.sum()


@dataclass
class FilterResult:
    """Filtering posteriors for every slot of a trace."""

    posteriors: np.ndarray  # (T, 2^N), row t is p(S_t | A_1:t)
    log_likelihood: float
    scale_factors: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def final(self) -> JointStateDistribution:
        return JointStateDistribution(self.posteriors[-1].copy(), self.log_likelihood)


def _check_observation(params: HyperParams, obs: Observation) -> None:
    if obs.activations.shape != (params.n_devices,) or obs.observed_mask.shape != (
        params.n_devices,
    ):
        raise ContractViolationError(
            f"Observation must cover {params.n_devices} devices, got {obs.activations.shape}"
        )


def stack_trace(trace: ObservationTrace) -> tuple[np.ndarray, np.ndarray]:
    """Activations and masks of a trace as (T, K) arrays."""
    if not trace:
        return np.zeros((0, 0), dtype=np.int8), np.zeros((0, 0), dtype=np.int8)
    n_devices = trace[0].n_devices
    if any(obs.n_devices != n_devices for obs in trace):
        raise ContractViolationError("Observation trace mixes device counts")
    activations = np.stack([obs.activations * obs.observed_mask for obs in trace])
    masks = np.stack([obs.observed_mask for obs in trace])
    return activations.astype(np.float64), masks.astype(np.float64)


def log_emissions(q: np.ndarray, activations: np.ndarray, masks: np.ndarray) -> np.ndarray:
    """
    log p(A_t | S_t = j) for a block of slots, shape (T, 2^N).

    Unobserved devices contribute a factor 1. Impossible observations map to -inf.
    """
    probs = joint_activation_probs(q)
    active = activations * masks
    silent = (1.0 - activations) * masks
    with np.errstate(divide="ignore"):
        log_on = np.log(probs)
        log_off = np.log1p(-probs)
    impossible = (active @ (probs <= 0.0).T.astype(np.float64)) + (
        silent @ (probs >= 1.0).T.astype(np.float64)
    )
    finite_on = np.where(np.isfinite(log_on), log_on, 0.0)
    finite_off = np.where(np.isfinite(log_off), log_off, 0.0)
    result = active @ finite_on.T + silent @ finite_off.T
    return np.where(impossible > 0.0, -np.inf, result)


def _absorb(predicted: np.ndarray, log_e: np.ndarray) -> tuple[np.ndarray, float]:
    support = (predicted > 0.0) & np.isfinite(log_e)
    if not np.any(support):
        raise InconsistentObservationError(
            "Observation has zero probability under every reachable joint state"
        )
    shift = float(np.max(log_e[support]))
    weights = np.where(support, predicted * np.exp(np.where(support, log_e, 0.0) - shift), 0.0)
    total = float(weights.sum())
    if total <= 0.0:
        raise InconsistentObservationError("Posterior weights underflowed to zero")
    return weights / total, float(np.log(total)) + shift


def emission_likelihood(params: HyperParams, s: np.ndarray, obs: Observation) -> float:
    """p(A_t | S_t = s): product over observed devices of p_k or 1 - p_k."""
    _check_observation(params, obs)
    state = np.asarray(s)
    if state.shape != (params.n_events,):
        raise ContractViolationError(f"Event state must have length {params.n_events}")
    p = 1.0 - np.prod(np.where(state[:, None] == 1, 1.0 - params.q, 1.0), axis=0)
    factors = np.where(obs.activations == 1, p, 1.0 - p)
    return float(np.prod(np.where(obs.observed_mask == 1, factors, 1.0)))


def forward_update(
    params: HyperParams, prior: JointStateDistribution, obs: Observation
) -> JointStateDistribution:
    """One step of the forward recursion: predict through the transition law, then weight."""
    _check_observation(params, obs)
    if prior.n_events != params.n_events:
        raise ContractViolationError("Prior and parameters disagree on the number of events")
    predicted = propagate(prior.normalized(), params.eps0, params.eps1)
    activations = (obs.activations * obs.observed_mask).astype(np.float64)[None, :]
    log_e = log_emissions(params.q, activations, obs.observed_mask.astype(np.float64)[None, :])[0]
    weights, log_norm = _absorb(predicted, log_e)
    return JointStateDistribution(weights, prior.log_likelihood + log_norm)


def filter_trace(
    params: HyperParams,
    trace: ObservationTrace,
    prior: Optional[JointStateDistribution] = None,
) -> FilterResult:
    """Run the forward recursion over a whole trace from the all-Off prior."""
    prior = prior or JointStateDistribution.point_mass(params.n_events)
    activations, masks = stack_trace(trace)
    if activations.shape[0] and activations.shape[1] != params.n_devices:
        raise ContractViolationError("Trace and parameters disagree on the number of devices")
    log_e = log_emissions(params.q, activations, masks) if len(trace) else np.zeros((0, 0))

    posteriors = np.empty((len(trace), prior.weights.size))
    scale = np.empty(len(trace))
    current = prior.normalized()
    for t in range(len(trace)):
        predicted = propagate(current, params.eps0, params.eps1)
        current, scale[t] = _absorb(predicted, log_e[t])
        posteriors[t] = current
    return FilterResult(posteriors, prior.log_likelihood + float(scale.sum()), scale)


def trace_log_likelihood(params: HyperParams, trace: ObservationTrace) -> float:
    """log p(A_1:T) under the given hyperparameters."""
    return filter_trace(params, trace).log_likelihood


def map_states(result: FilterResult) -> List[np.ndarray]:
    """Per-slot argmax of the filtering posterior, ties to the lowest joint index."""
    n_events = int(result.posteriors.shape[1]).bit_length() - 1
    states = joint_states(n_events)
    return [states[int(np.argmax(row))].copy() for row in result.posteriors]
