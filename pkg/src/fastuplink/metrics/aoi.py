"""Age of information per device."""

import numpy as np

from ..models.params import ContractViolationError
from .regret import _pair


def update_aoi(ages: np.ndarray, grants: np.ndarray, truth: np.ndarray) -> np.ndarray:
    """Reset the age of every device that transmitted this slot; age every other device by one."""
    u, a = _pair(grants, truth)
    ages = np.asarray(ages, dtype=np.int64)
    if ages.shape != u.shape:
        raise ContractViolationError(f"Age vector has shape {ages.shape}, grant vector {u.shape}")
    return np.where((u == 1) & (a == 1), 0, ages + 1)


def average_aoi(ages: np.ndarray) -> float:
    return float(np.mean(ages))


def peak_aoi(ages: np.ndarray) -> int:
    return int(np.max(ages))
