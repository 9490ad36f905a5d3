"""Policy registry: every grant policy by name."""

import inspect
from typing import Any, Dict, List, Optional, Type

from ..models.params import ModelParams
from ..models.rng import RngStream
from .base import Scheduler
from .learning import OfflineLearningScheduler, OnlineAoIScheduler
from .predictive import (
    FeedbackAoIScheduler,
    FeedbackScheduler,
    GenieScheduler,
    LimitedInfoScheduler,
    SteadyStateScheduler,
)
from .simple import GrantFreeScheduler, TdmaScheduler

POLICIES: Dict[str, Type[Scheduler]] = {
    "tdma": TdmaScheduler,
    "gf": GrantFreeScheduler,
    "fu-genie": GenieScheduler,
    "fu-feedback": FeedbackScheduler,
    "fu-limited": LimitedInfoScheduler,
    "fu-baseline": SteadyStateScheduler,
    "fu-offline": OfflineLearningScheduler,
    "fu-online-aoi": OnlineAoIScheduler,
    "fu-feedback-aoi": FeedbackAoIScheduler,
}

# The set compared by default; fu-feedback-aoi is opt-in.
DEFAULT_POLICIES: List[str] = [
    "tdma",
    "gf",
    "fu-genie",
    "fu-feedback",
    "fu-limited",
    "fu-baseline",
    "fu-offline",
    "fu-online-aoi",
]

# Policies whose beta defaults to the configured value instead of 0.
AOI_POLICIES = frozenset({"fu-feedback-aoi", "fu-online-aoi"})
LEARNING_POLICIES = frozenset({"fu-offline", "fu-online-aoi"})
_UNINFORMED = (TdmaScheduler, GrantFreeScheduler)


def get_scheduler(
    name: str,
    params: ModelParams,
    n_slots: Optional[int] = None,
    beta: Optional[float] = None,
    rng: Optional[RngStream] = None,
    p_ss_mode: Optional[str] = None,
    **options: Any,
) -> Scheduler:
    """
    Build a fresh scheduler for one run.

    rng is only consumed by the learning policies; options are forwarded to them
    (max_iters, training_horizon, window, warm_start, soft).
    """
    if name not in POLICIES:
        raise ValueError(f"Unknown policy: {name}. Available: {list(POLICIES.keys())}")
    cls = POLICIES[name]
    n_slots = params.n_slots if n_slots is None else n_slots
    if issubclass(cls, _UNINFORMED):
        return cls(params.n_devices, n_slots)

    kwargs: Dict[str, Any] = {"p_ss_mode": p_ss_mode}
    if beta is not None:
        kwargs["beta"] = beta
    elif name not in AOI_POLICIES:
        kwargs["beta"] = 0.0
    if name in LEARNING_POLICIES:
        kwargs["rng"] = rng
        accepted = inspect.signature(cls.__init__).parameters
        kwargs.update(
            {key: value for key, value in options.items() if key in accepted and value is not None}
        )
    return cls(params, n_slots, **kwargs)


def describe_policies() -> List[Dict[str, str]]:
    """Name, description and observation model of every registered policy."""
    return [
        {
            "name": name,
            "description": cls.description,
            "observation_model": cls.observation_model.value,
        }
        for name, cls in POLICIES.items()
    ]
