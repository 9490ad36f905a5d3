"""Fast uplink policies that rank devices by predicted activation."""

from abc import abstractmethod
from typing import Optional

import numpy as np

from ..config import get_settings
from ..inference.filter import JointStateDistribution, Observation, forward_update
from ..inference.prediction import predict_activation_scores
from ..models.dynamics import next_step_activation_probs, steady_state_activation_probs
from ..models.params import HyperParams, ModelParams, initial_state
from ..models.rng import RngStream
from .base import (
    ObservationModel,
    Scheduler,
    priority_index,
    select_top,
    steady_state_weight,
)

settings = get_settings()


class IndexScheduler(Scheduler):
    """Grant the L devices with the highest priority index."""

    def __init__(
        self,
        params: HyperParams,
        n_slots: int,
        beta: float = 0.0,
        p_ss_mode: Optional[str] = None,
    ):
        super().__init__(params.n_devices, n_slots, beta)
        self.state.params_known = params
        self.p_ss_mode = p_ss_mode
        self._p_ss: Optional[float] = None

    @property
    def params(self) -> HyperParams:
        assert self.state.params_known is not None
        return self.state.params_known

    @property
    def p_ss(self) -> float:
        if self._p_ss is None:
            self._p_ss = steady_state_weight(self.params, self.p_ss_mode)
        return self._p_ss

    @abstractmethod
    def scores(self) -> np.ndarray:
        """Predicted activation score of every device for the coming slot."""
        pass

    def schedule(self, rng: RngStream, truth: Optional[np.ndarray] = None) -> np.ndarray:
        scores = self.scores()
        p_ss = self.p_ss if self.beta > 0 else 0.0
        index = priority_index(scores, self.state.ages, self.beta, p_ss)
        return select_top(index, self.n_slots)


class GenieScheduler(IndexScheduler):
    """Knows the true event state and predicts from it directly."""

    policy_name = "fu-genie"
    observation_model = ObservationModel.GENIE
    description = "True event state known; no filtering"

    def __init__(self, params: ModelParams, n_slots: int, beta: float = 0.0, **kwargs):
        super().__init__(params, n_slots, beta, **kwargs)
        self.true_state = initial_state(params.n_events)

    def scores(self) -> np.ndarray:
        assert isinstance(self.params, ModelParams)
        return next_step_activation_probs(self.params, self.true_state)

    def observe(
        self,
        truth: np.ndarray,
        grants: np.ndarray,
        events: Optional[np.ndarray] = None,
    ) -> None:
        if events is None:
            raise ValueError("The genie policy needs the true event state of every slot")
        super().observe(truth, grants, events)
        self.true_state = np.asarray(events, dtype=np.int8).copy()


class FilteringScheduler(IndexScheduler):
    """Maintains the filtering posterior over event states and ranks from its MAP state."""

    observation_model = ObservationModel.FULL

    def __init__(self, params: HyperParams, n_slots: int, beta: float = 0.0, **kwargs):
        super().__init__(params, n_slots, beta, **kwargs)
        self.state.posterior = JointStateDistribution.point_mass(params.n_events)

    def scores(self) -> np.ndarray:
        assert self.state.posterior is not None
        return predict_activation_scores(self.params, self.state.posterior).per_device

    def make_observation(self, truth: np.ndarray, grants: np.ndarray) -> Observation:
        if self.observation_model is ObservationModel.SCHEDULED:
            return Observation.scheduled(truth, grants)
        return Observation.full(truth)

    def observe(
        self,
        truth: np.ndarray,
        grants: np.ndarray,
        events: Optional[np.ndarray] = None,
    ) -> None:
        super().observe(truth, grants, events)
        self.update_posterior(self.make_observation(truth, grants))

    def update_posterior(self, obs: Observation) -> None:
        assert self.state.posterior is not None
        self.state.posterior = forward_update(self.params, self.state.posterior, obs)


class FeedbackScheduler(FilteringScheduler):
    policy_name = "fu-feedback"
    description = "Posterior updated with the activations of every device"


class FeedbackAoIScheduler(FeedbackScheduler):
    """Feedback scheduling with the age term switched on (configured beta by default)."""

    policy_name = "fu-feedback-aoi"
    description = "fu-feedback with age-compensated priority index"

    def __init__(
        self, params: HyperParams, n_slots: int, beta: Optional[float] = None, **kwargs
    ):
        super().__init__(params, n_slots, settings.beta if beta is None else beta, **kwargs)


class LimitedInfoScheduler(FilteringScheduler):
    policy_name = "fu-limited"
    observation_model = ObservationModel.SCHEDULED
    description = "Posterior updated with the activations of scheduled devices only"


class SteadyStateScheduler(IndexScheduler):
    """Ranks by the stationary activation probabilities; no per-slot inference."""

    policy_name = "fu-baseline"
    description = "Stationary activation probabilities, computed once"

    def __init__(self, params: ModelParams, n_slots: int, beta: float = 0.0, **kwargs):
        params.require_steady_state()
        super().__init__(params, n_slots, beta, **kwargs)
        self._scores = steady_state_activation_probs(params)

    def scores(self) -> np.ndarray:
        return self._scores
