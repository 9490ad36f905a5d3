"""Ground-truth model parameters and their sampling law."""

from dataclasses import dataclass
from typing import Any, Dict, Optional, Protocol

import numpy as np

from ..config import get_settings
from .rng import RngStream

settings = get_settings()


class ContractViolationError(ValueError):
    """Raised when an argument breaks a dimension or range precondition."""

    pass


class UndefinedSteadyStateError(ValueError):
    """Raised when an event has eps0 + eps1 = 0, so no unique steady state exists."""

    def __init__(self, events: list[int]):
        self.events = events
        super().__init__(f"Steady state undefined for events {events} (eps0 + eps1 = 0)")


class HyperParams(Protocol):
    """Anything carrying the hyperparameters the filter and the schedulers read."""

    @property
    def n_events(self) -> int: ...

    @property
    def n_devices(self) -> int: ...

    @property
    def eps0(self) -> np.ndarray: ...

    @property
    def eps1(self) -> np.ndarray: ...

    @property
    def q(self) -> np.ndarray: ...


def _probability_array(name: str, values: Any, shape: tuple[int, ...]) -> np.ndarray:
    array = np.array(values, dtype=np.float64)
    if array.shape != shape:
        raise ContractViolationError(f"{name} must have shape {shape}, got {array.shape}")
    if not np.all(np.isfinite(array)) or np.any(array < 0.0) or np.any(array > 1.0):
        raise ContractViolationError(f"{name} entries must lie in [0, 1]")
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class ModelParams:
    """
    The generative ground truth of a cell.

    N hidden binary events flip Off with probability eps0 and On with probability
    eps1 each slot; while event n is On it activates device k with probability
    q[n, k], independently across events (noisy-OR). L grants are issued per slot.
    """

    n_events: int
    n_devices: int
    n_slots: int
    eps0: np.ndarray
    eps1: np.ndarray
    q: np.ndarray

    def __post_init__(self) -> None:
        if self.n_events < 1 or self.n_devices < 1 or self.n_slots < 1:
            raise ContractViolationError("n_events, n_devices and n_slots must be positive")
        if self.n_slots > self.n_devices:
            raise ContractViolationError(
                f"n_slots ({self.n_slots}) cannot exceed n_devices ({self.n_devices})"
            )
        object.__setattr__(self, "eps0", _probability_array("eps0", self.eps0, (self.n_events,)))
        object.__setattr__(self, "eps1", _probability_array("eps1", self.eps1, (self.n_events,)))
        object.__setattr__(
            self, "q", _probability_array("q", self.q, (self.n_events, self.n_devices))
        )

    @property
    def n_joint_states(self) -> int:
        return 1 << self.n_events

    def require_steady_state(self) -> None:
        """Reject parameters for steady-state use when some event never moves."""
        stuck = [int(n) for n in np.flatnonzero(self.eps0 + self.eps1 <= 0.0)]
        if stuck:
            raise UndefinedSteadyStateError(stuck)

    def with_slots(self, n_slots: int) -> "ModelParams":
        return ModelParams(self.n_events, self.n_devices, n_slots, self.eps0, self.eps1, self.q)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_events": self.n_events,
            "n_devices": self.n_devices,
            "n_slots": self.n_slots,
            "eps0": self.eps0.tolist(),
            "eps1": self.eps1.tolist(),
            "q": self.q.tolist(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ModelParams":
        return cls(
            n_events=int(data["n_events"]),
            n_devices=int(data["n_devices"]),
            n_slots=int(data["n_slots"]),
            eps0=data["eps0"],
            eps1=data["eps1"],
            q=data["q"],
        )


def sample_params(
    n_events: Optional[int] = None,
    n_devices: Optional[int] = None,
    n_slots: Optional[int] = None,
    rng: Optional[RngStream] = None,
    eps_high: float = 0.5,
) -> ModelParams:
    """
    Draw a cell: eps0, eps1 i.i.d. uniform on [0, eps_high], q i.i.d. uniform on [0, 1].

    Dimensions default to the configured cell (N=5, K=50, L=10).
    """
    n_events = settings.n_events if n_events is None else n_events
    n_devices = settings.n_devices if n_devices is None else n_devices
    n_slots = settings.n_slots if n_slots is None else n_slots
    if n_events < 1 or n_devices < 1 or n_slots < 1 or n_slots > n_devices:
        raise ContractViolationError("Dimensions must be positive with n_slots <= n_devices")
    rng = rng if rng is not None else RngStream(seed=0)

    eps0 = rng.uniform(0.0, eps_high, n_events)
    eps1 = rng.uniform(0.0, eps_high, n_events)
    q = rng.uniform(0.0, 1.0, (n_events, n_devices))
    return ModelParams(n_events, n_devices, n_slots, eps0, eps1, q)


def initial_state(n_events: int) -> np.ndarray:
    """The slot-0 event state: every event Off."""
    return np.zeros(n_events, dtype=np.int8)
