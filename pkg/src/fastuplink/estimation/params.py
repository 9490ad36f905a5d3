"""Estimated hyperparameters and the estimation floor."""

from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np

from ..config import get_settings
from ..models.params import ModelParams
from ..models.rng import RngStream

settings = get_settings()


class InsufficientDataError(ValueError):
    """Raised when a trace is too short for the requested estimate."""

    def __init__(self, required: int, available: int):
        self.required = required
        self.available = available
        super().__init__(f"Need at least {required} observed slots, got {available}")


def clamp(values: np.ndarray, floor: Optional[float] = None) -> np.ndarray:
    """Keep probabilities inside [floor, 1 - floor]."""
    floor = settings.estimation_floor if floor is None else floor
    return np.clip(np.asarray(values, dtype=np.float64), floor, 1.0 - floor)


@dataclass
class EstimatedParams:
    """Hyperparameters learned from observations, clamped away from 0 and 1."""

    eps0_hat: np.ndarray
    eps1_hat: np.ndarray
    q_hat: np.ndarray
    iterations_run: int = 0
    converged: bool = False
    floor: float = settings.estimation_floor

    def __post_init__(self) -> None:
        self.eps0_hat = clamp(self.eps0_hat, self.floor)
        self.eps1_hat = clamp(self.eps1_hat, self.floor)
        self.q_hat = clamp(self.q_hat, self.floor)

    # read through the same names as ModelParams so filters and schedulers take either
    @property
    def eps0(self) -> np.ndarray:
        return self.eps0_hat

    @property
    def eps1(self) -> np.ndarray:
        return self.eps1_hat

    @property
    def q(self) -> np.ndarray:
        return self.q_hat

    @property
    def n_events(self) -> int:
        return int(self.q_hat.shape[0])

    @property
    def n_devices(self) -> int:
        return int(self.q_hat.shape[1])

    @classmethod
    def initial(
        cls,
        n_events: int,
        n_devices: int,
        rng: RngStream,
        low: float = 0.2,
        high: float = 0.8,
    ) -> "EstimatedParams":
        """Uniform starting point for EM."""
        eps0 = rng.uniform(low, high, n_events)
        eps1 = rng.uniform(low, high, n_events)
        q = rng.uniform(low, high, (n_events, n_devices))
        return cls(eps0, eps1, q)

    @classmethod
    def from_model(cls, params: ModelParams) -> "EstimatedParams":
        return cls(params.eps0.copy(), params.eps1.copy(), params.q.copy())

    def to_model_params(self, n_slots: int) -> ModelParams:
        return ModelParams(
            self.n_events, self.n_devices, n_slots, self.eps0_hat, self.eps1_hat, self.q_hat
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "eps0_hat": self.eps0_hat.tolist(),
            "eps1_hat": self.eps1_hat.tolist(),
            "q_hat": self.q_hat.tolist(),
            "iterations_run": self.iterations_run,
            "converged": self.converged,
        }
