"""Iterative hyperparameter estimation.

Each iteration decodes the per-slot MAP event states under the current
estimates, updates the transition probabilities with one Baum-Welch step and
re-fits q against the decoded states. A soft variant that fits q against the
smoothed posteriors instead of hard states is available for comparison.
"""

import logging
from typing import Callable, Optional

import numpy as np

from ..config import get_settings
from ..inference.filter import ObservationTrace, filter_trace, map_states
from ..models.kernel import joint_states
from ..models.rng import RngStream
from .baum_welch import baum_welch_epsilon, forward_backward
from .params import EstimatedParams, InsufficientDataError
from .q_search import estimate_q_all, estimate_q_soft

logger = logging.getLogger(__name__)
settings = get_settings()


def _relative_change(new: np.ndarray, old: np.ndarray) -> float:
    return float(np.max(np.abs(new - old) / np.maximum(np.abs(old), 1e-300)))


def parameter_change(new: EstimatedParams, old: EstimatedParams) -> float:
    """Largest relative change over every estimated probability."""
    return max(
        _relative_change(new.eps0_hat, old.eps0_hat),
        _relative_change(new.eps1_hat, old.eps1_hat),
        _relative_change(new.q_hat, old.q_hat),
    )


def em_step(
    trace: ObservationTrace,
    current: EstimatedParams,
    rng: RngStream,
    soft: bool = False,
    restarts: Optional[int] = None,
) -> EstimatedParams:
    """One decode / transition / activation update."""
    if soft:
        smoothing = forward_backward(current, trace)
        eps0, eps1 = baum_welch_epsilon(trace, current, current.floor, smoothing=smoothing)
        q = estimate_q_soft(
            trace,
            smoothing.posteriors,
            joint_states(current.n_events),
            rng=rng,
            warm=current.q_hat,
            floor=current.floor,
            restarts=restarts,
        )
    else:
        states = map_states(filter_trace(current, trace))
        eps0, eps1 = baum_welch_epsilon(trace, current, current.floor)
        q = estimate_q_all(
            trace, states, rng=rng, warm=current.q_hat, restarts=restarts, floor=current.floor
        )
    return EstimatedParams(eps0, eps1, q, floor=current.floor)


def em_iterate(
    trace: ObservationTrace,
    init: EstimatedParams,
    max_iters: Optional[int] = None,
    rng: Optional[RngStream] = None,
    tol: Optional[float] = None,
    soft: bool = False,
    on_iteration: Optional[Callable[[int, EstimatedParams], None]] = None,
    restarts: Optional[int] = None,
    min_iters: Optional[int] = None,
) -> EstimatedParams:
    """
    Alternate decoding and re-estimation until the relative change of every
    parameter drops below tol or max_iters iterations have run.

    The tolerance is checked from iteration min_iters on. restarts is the number of
    q-search starting points (the warm start counts as one).
    """
    max_iters = settings.em_max_iters if max_iters is None else max_iters
    tol = settings.em_tolerance if tol is None else tol
    min_iters = settings.em_min_iters if min_iters is None else min_iters
    if max_iters < 1:
        raise ValueError(f"max_iters must be at least 1, got {max_iters}")
    if len(trace) < 2:
        raise InsufficientDataError(required=2, available=len(trace))
    rng = rng if rng is not None else RngStream(seed=0, name="q-restarts")

    current = EstimatedParams(init.eps0_hat, init.eps1_hat, init.q_hat, floor=init.floor)
    converged = False
    iteration = 0
    for iteration in range(1, max_iters + 1):
        updated = em_step(trace, current, rng, soft=soft, restarts=restarts)
        change = parameter_change(updated, current)
        logger.debug("EM iteration %d: max relative change %.3g", iteration, change)
        current = updated
        current.iterations_run = iteration
        if on_iteration is not None:
            on_iteration(iteration, current)
        if iteration >= min_iters and change <= tol:
            converged = True
            break

    current.converged = converged
    logger.info(
        "EM on %d slots finished after %d iterations (converged=%s)",
        len(trace),
        iteration,
        converged,
    )
    return current
