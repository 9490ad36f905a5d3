"""Ground-truth event and activation trajectories."""

from dataclasses import dataclass
from typing import TYPE_CHECKING, List, Optional

import numpy as np

from .dynamics import sample_activations, step_events
from .params import ContractViolationError, ModelParams, initial_state
from .rng import RngStream

if TYPE_CHECKING:
    from ..inference.filter import Observation


@dataclass(frozen=True, eq=False)
class Trajectory:
    """
    Slots 1..T of one cell.

    events[t - 1] is S_t and activations[t - 1] is A_t; slot 0 is the all-Off start.
    """

    events: np.ndarray
    activations: np.ndarray

    def __len__(self) -> int:
        return int(self.activations.shape[0])

    def observations(self) -> List["Observation"]:
        """Full observations of every slot, as a training trace."""
        from ..inference.filter import Observation

        return [Observation.full(a) for a in self.activations]


def generate_trajectory(
    params: ModelParams,
    horizon: int,
    rng: RngStream,
    start: Optional[np.ndarray] = None,
) -> Trajectory:
    """
    Simulate T slots. Event transitions draw from the "events" substream and device
    activations from the "activations" substream of rng.

    start is the event state of slot 0 (all Off unless given).
    """
    if horizon < 1:
        raise ContractViolationError(f"Horizon must be at least 1, got {horizon}")
    event_rng = rng.child("events")
    activation_rng = rng.child("activations")

    events = np.zeros((horizon, params.n_events), dtype=np.int8)
    activations = np.zeros((horizon, params.n_devices), dtype=np.int8)
    state = initial_state(params.n_events) if start is None else np.asarray(start, np.int8)
    if state.shape != (params.n_events,):
        raise ContractViolationError(f"Start state must have length {params.n_events}")
    for t in range(horizon):
        state = step_events(params, state, event_rng)
        events[t] = state
        activations[t] = sample_activations(params, state, activation_rng)
    events.setflags(write=False)
    activations.setflags(write=False)
    return Trajectory(events=events, activations=activations)
