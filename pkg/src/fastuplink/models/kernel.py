"""Joint event-state kernel shared by the simulator, the filter and the estimator.

A joint state is an integer j in [0, 2^N); bit n of j is the state of event n.
Weights over joint states are viewed as an N-way tensor of shape (2,)*N so the
factorized transition law can be applied one event at a time.
"""

from functools import lru_cache
from typing import Optional

import numpy as np

from .params import ContractViolationError

MAX_EVENTS = 16


@lru_cache(maxsize=32)
def _joint_states(n_events: int) -> np.ndarray:
    index = np.arange(1 << n_events)[:, None]
    bits = ((index >> np.arange(n_events)[None, :]) & 1).astype(np.int8)
    bits.setflags(write=False)
    return bits


def joint_states(n_events: int) -> np.ndarray:
    """Bit patterns of all 2^N joint states, shape (2^N, N)."""
    if not 1 <= n_events <= MAX_EVENTS:
        raise ContractViolationError(
            f"Exact joint-state enumeration supports 1..{MAX_EVENTS} events, got {n_events}"
        )
    return _joint_states(n_events)


def state_index(state: np.ndarray) -> int:
    """Joint index of an event state vector."""
    return int(np.dot(np.asarray(state, dtype=np.int64), 1 << np.arange(len(state))))


def event_axis(n: int, n_events: int) -> int:
    """Tensor axis holding event n (C-order reshape puts bit 0 on the last axis)."""
    return n_events - 1 - n


def event_kernels(eps0: np.ndarray, eps1: np.ndarray) -> np.ndarray:
    """Per-event 2x2 transition matrices T[n, i, j] = P(next = j | current = i)."""
    kernels = np.empty((len(eps0), 2, 2), dtype=np.float64)
    kernels[:, 0, 0] = 1.0 - eps1
    kernels[:, 0, 1] = eps1
    kernels[:, 1, 0] = eps0
    kernels[:, 1, 1] = 1.0 - eps0
    return kernels


def propagate(
    weights: np.ndarray,
    eps0: np.ndarray,
    eps1: np.ndarray,
    transpose: bool = False,
    skip: Optional[int] = None,
) -> np.ndarray:
    """
    Push weights of shape (..., 2^N) one slot through the transition law.

    With transpose=False this is sum_i w(i) P(i -> j) (prediction); with
    transpose=True it is sum_j P(i -> j) w(j) (the backward recursion). The
    event named by skip is left untouched.
    """
    n_events = len(eps0)
    batch = weights.shape[:-1]
    tensor = weights.reshape(batch + (2,) * n_events)
    kernels = event_kernels(eps0, eps1)
    for n in range(n_events):
        if n == skip:
            continue
        axis = len(batch) + event_axis(n, n_events)
        matrix = kernels[n].T if transpose else kernels[n]
        tensor = np.moveaxis(np.tensordot(tensor, matrix, axes=([axis], [0])), -1, axis)
    return tensor.reshape(weights.shape)


def joint_activation_probs(q: np.ndarray) -> np.ndarray:
    """P(device k active | joint state j) for every j and k, shape (2^N, K)."""
    states = joint_states(q.shape[0])
    silent = np.ones((states.shape[0], q.shape[1]), dtype=np.float64)
    for n in range(q.shape[0]):
        silent *= np.where(states[:, n : n + 1] == 1, 1.0 - q[n][None, :], 1.0)
    return 1.0 - silent
