"""Allocation quality per slot: wrong and missed allocations, regret, system usage."""

from typing import TYPE_CHECKING, Optional, Sequence, Union

import numpy as np

from ..models.params import ContractViolationError

if TYPE_CHECKING:
    from .trace import MetricsTrace


def _pair(grants: np.ndarray, truth: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    u = np.asarray(grants, dtype=np.int64)
    a = np.asarray(truth, dtype=np.int64)
    if u.shape != a.shape:
        raise ContractViolationError(
            f"Grant vector has shape {u.shape}, activation vector {a.shape}"
        )
    return u, a


def wrong_allocations(
    grants: np.ndarray,
    truth: np.ndarray,
    resources: Optional[int] = None,
) -> int:
    """
    Number of granted resources that carried no transmission.

    When resources is given (grant-free access, where the grant vector marks only
    successful transmissions) every resource not accounted for by a grant counts
    as wrong too, so idle and collided preambles are charged.
    """
    u, a = _pair(grants, truth)
    omega = int(np.maximum(u - a, 0).sum())
    if resources is not None:
        omega += max(0, resources - int(u.sum()))
    return omega


def missed_allocations(grants: np.ndarray, truth: np.ndarray) -> int:
    """Number of active devices that did not receive a resource."""
    u, a = _pair(grants, truth)
    return int(np.maximum(a - u, 0).sum())


def regret_slot(omega: int, mu: int) -> int:
    """Devices a better allocation could have served this slot."""
    if omega < 0 or mu < 0:
        raise ContractViolationError(f"Counts must be nonnegative, got omega={omega}, mu={mu}")
    return min(omega, mu)


def system_usage(trace: Union["MetricsTrace", Sequence[int]], n_slots: int, t: int) -> float:
    """Fraction of the t * L resources of slots 1..t that an active device used."""
    if t < 1:
        raise ContractViolationError(f"Usage needs t >= 1, got {t}")
    omegas = trace.omegas if hasattr(trace, "omegas") else trace
    if len(omegas) < t:
        raise ContractViolationError(f"Only {len(omegas)} slots recorded, asked for {t}")
    used = sum(n_slots - int(omega) for omega in list(omegas)[:t])
    return used / (t * n_slots)


def cost(avg_regret: float, avg_aoi: float) -> float:
    """Regret/age trade-off minimized when tuning beta."""
    if avg_regret < 0 or avg_aoi < 0:
        raise ContractViolationError("Cost inputs must be nonnegative")
    return avg_regret * avg_aoi
