"""Replay a ground-truth trajectory against a scheduler."""

from typing import TYPE_CHECKING, Optional

import numpy as np

from .metrics.trace import MetricsTrace
from .models.params import ContractViolationError
from .models.rng import RngStream
from .models.trajectory import Trajectory

if TYPE_CHECKING:
    from .schedulers.base import Scheduler


def replay(
    trajectory: Trajectory,
    scheduler: "Scheduler",
    rng: Optional[RngStream] = None,
    ages: Optional[np.ndarray] = None,
) -> MetricsTrace:
    """
    Run the scheduler slot by slot on a fixed trajectory.

    Each slot: grants are issued, the slot's activations are revealed and scored,
    then the scheduler observes them. The trajectory is never modified. ages, when
    given, are the device ages the run starts from.
    """
    if trajectory.activations.shape[1] != scheduler.n_devices:
        raise ContractViolationError(
            f"Trajectory has {trajectory.activations.shape[1]} devices, "
            f"scheduler {scheduler.n_devices}"
        )
    rng = rng if rng is not None else RngStream(seed=0, name="gf-choices")
    metrics = MetricsTrace(n_devices=scheduler.n_devices, n_slots=scheduler.n_slots)
    if ages is not None:
        metrics.ages = np.array(ages, dtype=np.int64)
    for events, truth in zip(trajectory.events, trajectory.activations):
        grants = scheduler.schedule(rng, truth if scheduler.device_side else None)
        metrics.record(grants, truth, resources=scheduler.n_slots)
        scheduler.observe(truth, grants, events)
    return metrics
