"""Common scheduler interface, the priority index and top-L grant selection."""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Union

import numpy as np

from ..config import get_settings
from ..inference.filter import JointStateDistribution, Observation
from ..metrics.aoi import update_aoi
from ..models.params import (
    ContractViolationError,
    HyperParams,
    UndefinedSteadyStateError,
)
from ..models.rng import RngStream

settings = get_settings()


class ObservationModel(str, Enum):
    """What the base station learns about a slot after it ends."""

    NONE = "none"
    FULL = "full"
    SCHEDULED = "scheduled"
    GENIE = "genie"


class SteadyStateMode(str, Enum):
    """How the per-event stationary On probabilities collapse into one weight."""

    MEAN = "mean"
    MAX = "max"


@dataclass
class SchedulerState:
    """Everything a policy carries from one slot to the next."""

    kind: str
    n_devices: int
    ages: np.ndarray = field(init=False)
    posterior: Optional[JointStateDistribution] = None
    params_known: Optional[HyperParams] = None
    rr_pointer: int = 0
    history: List[Observation] = field(default_factory=list)
    beta: float = 0.0

    def __post_init__(self) -> None:
        self.ages = np.zeros(self.n_devices, dtype=np.int64)
        if not 0 <= self.rr_pointer < self.n_devices:
            raise ContractViolationError(f"Round-robin pointer {self.rr_pointer} out of range")
        check_beta(self.beta)


def check_beta(beta: float) -> float:
    if beta < 0:
        raise ContractViolationError(f"beta must be nonnegative, got {beta}")
    return float(beta)


def steady_state_weight(
    params: HyperParams,
    mode: Union[SteadyStateMode, str, None] = None,
) -> float:
    """Stationary On probability of the events, averaged (or maximized) over events."""
    mode = SteadyStateMode(mode or settings.p_ss_mode)
    eps0 = np.asarray(params.eps0, dtype=np.float64)
    eps1 = np.asarray(params.eps1, dtype=np.float64)
    total = eps0 + eps1
    stuck = [int(n) for n in np.flatnonzero(total <= 0.0)]
    if stuck:
        raise UndefinedSteadyStateError(stuck)
    on = eps1 / total
    return float(on.max() if mode is SteadyStateMode.MAX else on.mean())


def priority_index(
    scores: np.ndarray,
    ages: np.ndarray,
    beta: float,
    p_ss: float,
) -> np.ndarray:
    """I_k = score_k + beta * p_ss * age_k."""
    check_beta(beta)
    scores = np.asarray(scores, dtype=np.float64)
    if beta == 0.0:
        return scores.copy()
    return scores + beta * p_ss * np.asarray(ages, dtype=np.float64)


def select_top(index: np.ndarray, n_slots: int) -> np.ndarray:
    """Grant vector with ones on the n_slots largest entries; ties go to the lower device."""
    index = np.asarray(index, dtype=np.float64)
    grants = np.zeros(index.size, dtype=np.int8)
    chosen = np.argsort(-index, kind="stable")[: min(n_slots, index.size)]
    grants[chosen] = 1
    return grants


class Scheduler(ABC):
    """A grant policy: schedule a slot, then observe what happened in it."""

    policy_name: str
    observation_model: ObservationModel = ObservationModel.NONE
    description: str = ""
    # grant-free devices contend on their own, so the policy needs the slot's activations
    device_side: bool = False

    def __init__(self, n_devices: int, n_slots: int, beta: float = 0.0):
        if n_slots > n_devices:
            raise ContractViolationError(
                f"n_slots ({n_slots}) cannot exceed n_devices ({n_devices})"
            )
        self.n_devices = n_devices
        self.n_slots = n_slots
        self.state = SchedulerState(kind=self.policy_name, n_devices=n_devices, beta=beta)

    @property
    def beta(self) -> float:
        return self.state.beta

    @abstractmethod
    def schedule(self, rng: RngStream, truth: Optional[np.ndarray] = None) -> np.ndarray:
        """Return the grant vector of the coming slot."""
        pass

    def observe(
        self,
        truth: np.ndarray,
        grants: np.ndarray,
        events: Optional[np.ndarray] = None,
    ) -> None:
        """Absorb the slot's outcome. The base implementation only ages devices."""
        truth = np.asarray(truth)
        if truth.shape != (self.n_devices,):
            raise ContractViolationError(
                f"Activation vector must have length {self.n_devices}, got {truth.shape}"
            )
        self.state.ages = update_aoi(self.state.ages, grants, truth)
