"""Offline estimation runs and the regret-based estimation error."""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from ..config import get_settings
from ..estimation.em import em_iterate
from ..estimation.params import EstimatedParams
from ..inference.filter import Observation, ObservationTrace, trace_log_likelihood
from ..models.params import ContractViolationError, HyperParams, ModelParams
from ..models.rng import RngStream
from ..models.trajectory import Trajectory, generate_trajectory
from ..schedulers.predictive import FeedbackScheduler
from ..simulation import replay
from .report_service import OutputError

logger = logging.getLogger(__name__)
settings = get_settings()


def eval_trajectories(
    params: ModelParams,
    count: int,
    horizon: int,
    rng: RngStream,
) -> List[Trajectory]:
    """Independent evaluation runs of the cell, shared by every compared estimate."""
    return [generate_trajectory(params, horizon, rng.child(f"eval-{i}")) for i in range(count)]


def _mean_regret(params: HyperParams, n_slots: int, traces: Sequence[Trajectory]) -> float:
    regrets = [
        replay(trajectory, FeedbackScheduler(params, n_slots)).cumulative_regret
        for trajectory in traces
    ]
    return float(np.mean(regrets))


def estimation_error(
    params_true: ModelParams,
    params_hat: HyperParams,
    eval_traces: Sequence[Trajectory],
) -> float:
    """
    |mean regret of fu-feedback with the true hyperparameters - mean regret with the
    estimates|, both on the same evaluation trajectories.
    """
    if not eval_traces:
        raise ContractViolationError("Need at least one evaluation trajectory")
    true_regret = _mean_regret(params_true, params_true.n_slots, eval_traces)
    hat_regret = _mean_regret(params_hat, params_true.n_slots, eval_traces)
    return abs(true_regret - hat_regret)


@dataclass
class CurvePoint:
    iteration: int
    error: float
    log_likelihood: float


def estimation_curve(
    params_true: ModelParams,
    trace: ObservationTrace,
    init: EstimatedParams,
    eval_traces: Sequence[Trajectory],
    max_iters: Optional[int] = None,
    rng: Optional[RngStream] = None,
    soft: bool = False,
) -> List[CurvePoint]:
    """
    Estimation error after 0, 1, ..., Z EM iterations. Once EM has converged the
    remaining points repeat the converged value.
    """
    max_iters = settings.em_max_iters if max_iters is None else max_iters
    snapshots: List[EstimatedParams] = [init]
    em_iterate(
        trace,
        init,
        max_iters=max_iters,
        rng=rng,
        soft=soft,
        on_iteration=lambda _, estimate: snapshots.append(estimate),
    )
    snapshots.extend([snapshots[-1]] * (max_iters + 1 - len(snapshots)))
    points = []
    for iteration, estimate in enumerate(snapshots):
        points.append(
            CurvePoint(
                iteration=iteration,
                error=estimation_error(params_true, estimate, eval_traces),
                log_likelihood=trace_log_likelihood(estimate, trace),
            )
        )
    return points


def save_trace(trajectory: Trajectory, path: Union[str, Path]) -> Path:
    """Write the activations as CSV, one row per slot, columns d0..dK-1."""
    path = Path(path)
    columns = [f"d{k}" for k in range(trajectory.activations.shape[1])]
    try:
        pd.DataFrame(trajectory.activations, columns=columns).to_csv(path, index=False)
    except OSError as exc:
        raise OutputError(path, exc.strerror or str(exc)) from exc
    return path


def load_trace(path: Union[str, Path]) -> List[Observation]:
    """Read a fully observed activation trace written by save_trace."""
    frame = pd.read_csv(path)
    values = frame.to_numpy()
    if values.ndim != 2 or values.shape[0] == 0:
        raise ContractViolationError(f"Trace file {path} holds no slots")
    if not np.isin(values, (0, 1)).all():
        raise ContractViolationError(f"Trace file {path} must contain only 0/1 activations")
    return [Observation.full(row.astype(np.int8)) for row in values]


class EstimationService:
    """Learns hyperparameters from an observation trace."""

    def __init__(
        self,
        n_events: int = settings.n_events,
        max_iters: int = settings.em_max_iters,
        soft: bool = settings.soft_em,
    ):
        self.n_events = n_events
        self.max_iters = max_iters
        self.soft = soft

    def estimate(self, trace: ObservationTrace, seed: int = 0) -> EstimatedParams:
        if not trace:
            raise ContractViolationError("Cannot estimate from an empty trace")
        root = RngStream(seed)
        init = EstimatedParams.initial(self.n_events, trace[0].n_devices, root.child("em-init"))
        estimate = em_iterate(
            trace, init, self.max_iters, rng=root.child("q-restarts"), soft=self.soft
        )
        logger.info(
            "Estimated N=%d, K=%d from %d slots in %d iterations",
            estimate.n_events,
            estimate.n_devices,
            len(trace),
            estimate.iterations_run,
        )
        return estimate
