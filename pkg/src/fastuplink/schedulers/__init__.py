"""Grant allocation policies behind one schedule/observe interface."""

from .base import (
    ObservationModel,
    Scheduler,
    SchedulerState,
    SteadyStateMode,
    check_beta,
    priority_index,
    select_top,
    steady_state_weight,
)
from .learning import OfflineLearningScheduler, OnlineAoIScheduler, learn_offline
from .predictive import (
    FeedbackAoIScheduler,
    FeedbackScheduler,
    FilteringScheduler,
    GenieScheduler,
    IndexScheduler,
    LimitedInfoScheduler,
    SteadyStateScheduler,
)
from .registry import (
    AOI_POLICIES,
    DEFAULT_POLICIES,
    LEARNING_POLICIES,
    POLICIES,
    describe_policies,
    get_scheduler,
)
from .simple import GrantFreeScheduler, TdmaScheduler

__all__ = [
    "AOI_POLICIES",
    "DEFAULT_POLICIES",
    "FeedbackAoIScheduler",
    "FeedbackScheduler",
    "FilteringScheduler",
    "GenieScheduler",
    "GrantFreeScheduler",
    "IndexScheduler",
    "LEARNING_POLICIES",
    "LimitedInfoScheduler",
    "ObservationModel",
    "OfflineLearningScheduler",
    "OnlineAoIScheduler",
    "POLICIES",
    "Scheduler",
    "SchedulerState",
    "SteadyStateMode",
    "SteadyStateScheduler",
    "TdmaScheduler",
    "check_beta",
    "describe_policies",
    "get_scheduler",
    "learn_offline",
    "priority_index",
    "select_top",
    "steady_state_weight",
]
