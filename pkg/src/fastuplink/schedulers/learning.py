"""Fast uplink policies that learn the hyperparameters from observations."""

import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..config import get_settings
from ..estimation.em import em_iterate, parameter_change
from ..estimation.params import EstimatedParams
from ..inference.filter import JointStateDistribution, Observation, filter_trace
from ..metrics.regret import cost
from ..models.kernel import joint_states
from ..models.params import HyperParams, ModelParams
from ..models.rng import RngStream
from ..models.trajectory import generate_trajectory
from ..simulation import replay
from .predictive import FeedbackAoIScheduler, FeedbackScheduler

logger = logging.getLogger(__name__)
settings = get_settings()


def learn_offline(
    params: ModelParams,
    rng: RngStream,
    training_horizon: Optional[int] = None,
    max_iters: Optional[int] = None,
    soft: Optional[bool] = None,
) -> EstimatedParams:
    """
    Estimate the hyperparameters from a fully observed training run of the cell.

    The training trajectory comes from its own substream, so it is independent of
    the trajectory the policy is later evaluated on.
    """
    training_horizon = training_horizon or settings.training_horizon
    soft = settings.soft_em if soft is None else soft
    training = generate_trajectory(params, training_horizon, rng.child("offline-training"))
    init = EstimatedParams.initial(params.n_events, params.n_devices, rng.child("em-init"))
    return em_iterate(
        training.observations(),
        init,
        max_iters=max_iters,
        rng=rng.child("q-restarts"),
        soft=soft,
    )


def lookahead_candidates(
    current: float,
    grid_size: Optional[int] = None,
    beta_max: Optional[float] = None,
) -> List[float]:
    """0, the current beta and log-spaced points in [1e-3, beta_max]."""
    grid_size = grid_size or settings.online_beta_grid_size
    beta_max = settings.beta_max if beta_max is None else beta_max
    points = {0.0, float(current)}
    if beta_max > 1e-3:
        points.update(np.logspace(-3.0, math.log10(beta_max), grid_size).tolist())
    return sorted(points)


def lookahead_beta(
    params: HyperParams,
    n_slots: int,
    posterior: JointStateDistribution,
    ages: np.ndarray,
    rng: RngStream,
    candidates: Sequence[float],
    horizon: Optional[int] = None,
    replications: Optional[int] = None,
    p_ss_mode: Optional[str] = None,
) -> float:
    """
    The beta with the lowest regret-age cost over a short simulated future.

    The futures are simulated under params from event states drawn from the
    current posterior, and every candidate starts from the current ages on the same
    futures. Ties go to the lower age, then to the smaller beta.
    """
    horizon = horizon or settings.online_beta_lookahead
    replications = replications or settings.online_beta_replications
    if isinstance(params, EstimatedParams):
        model = params.to_model_params(n_slots)
    else:
        assert isinstance(params, ModelParams)
        model = params
    joint = joint_states(model.n_events)
    cumulative = np.cumsum(posterior.normalized())

    futures = []
    for r in range(replications):
        stream = rng.child(f"lookahead-{r}")
        index = int(np.searchsorted(cumulative, stream.random() * cumulative[-1], side="right"))
        start = joint[min(index, joint.shape[0] - 1)]
        futures.append(generate_trajectory(model, horizon, stream, start=start))

    scored: List[Tuple[float, float, float]] = []
    for beta in sorted({float(b) for b in candidates}):
        regrets, aois = [], []
        for future in futures:
            scheduler = FeedbackAoIScheduler(model, n_slots, beta=beta, p_ss_mode=p_ss_mode)
            scheduler.state.posterior = JointStateDistribution(posterior.weights.copy())
            scheduler.state.ages = np.array(ages, dtype=np.int64)
            metrics = replay(future, scheduler, ages=ages)
            regrets.append(metrics.average_regret)
            aois.append(metrics.mean_aoi)
        avg_regret, avg_aoi = float(np.mean(regrets)), float(np.mean(aois))
        scored.append((cost(avg_regret, avg_aoi), avg_aoi, beta))
    return min(scored)[2]


class OfflineLearningScheduler(FeedbackScheduler):
    """Feedback scheduling driven by hyperparameters learned before the run."""

    policy_name = "fu-offline"
    description = "fu-feedback with hyperparameters learned from a training trace"

    def __init__(
        self,
        params: ModelParams,
        n_slots: int,
        beta: float = 0.0,
        rng: Optional[RngStream] = None,
        training_horizon: Optional[int] = None,
        max_iters: Optional[int] = None,
        soft: Optional[bool] = None,
        **kwargs,
    ):
        rng = rng if rng is not None else RngStream(seed=0)
        self.estimate = learn_offline(params, rng, training_horizon, max_iters, soft)
        super().__init__(self.estimate, n_slots, beta, **kwargs)


class OnlineAoIScheduler(FeedbackScheduler):
    """
    Learns while it schedules.

    After every slot the observation joins the history and EM re-estimates the
    hyperparameters on it. The first fit runs up to max_iters iterations; later
    slots continue from the previous estimate for at most online_iters iterations
    (or restart from a fresh draw with the full budget when warm_start is off).
    The posterior is re-filtered over the history when the estimate moved and
    updated in place otherwise. Every beta_every slots beta is re-tuned on a
    simulated future under the current estimates.
    """

    policy_name = "fu-online-aoi"
    description = "Online EM learning with age-compensated priority index"

    def __init__(
        self,
        params: ModelParams,
        n_slots: int,
        beta: Optional[float] = None,
        rng: Optional[RngStream] = None,
        max_iters: Optional[int] = None,
        window: Optional[int] = None,
        warm_start: Optional[bool] = None,
        soft: Optional[bool] = None,
        online_iters: Optional[int] = None,
        q_restarts: Optional[int] = None,
        beta_every: Optional[int] = None,
        beta_lookahead: Optional[int] = None,
        beta_replications: Optional[int] = None,
        **kwargs,
    ):
        rng = rng if rng is not None else RngStream(seed=0)
        self.init_rng = rng.child("em-init")
        self.q_rng = rng.child("q-restarts")
        self.beta_rng = rng.child("beta-lookahead")
        self.max_iters = max_iters
        self.online_iters = online_iters or settings.online_em_iters
        self.q_restarts = q_restarts or settings.online_q_restarts
        self.window = window if window is not None else settings.online_window
        self.warm_start = settings.online_warm_start if warm_start is None else warm_start
        self.soft = settings.soft_em if soft is None else soft
        self.beta_every = settings.online_beta_every if beta_every is None else beta_every
        self.beta_lookahead = beta_lookahead
        self.beta_replications = beta_replications
        self.beta_history: List[Tuple[int, float]] = []
        self.fitted = False
        self.estimate = EstimatedParams.initial(params.n_events, params.n_devices, self.init_rng)
        super().__init__(
            self.estimate, n_slots, settings.beta if beta is None else beta, **kwargs
        )

    @property
    def history(self) -> List[Observation]:
        return self.state.history

    def _training_window(self) -> List[Observation]:
        if self.window is None:
            return self.history
        return self.history[-self.window :]

    def _refit(self, window: List[Observation]) -> EstimatedParams:
        if self.fitted and self.warm_start:
            return em_iterate(
                window,
                self.estimate,
                max_iters=self.online_iters,
                rng=self.q_rng,
                soft=self.soft,
                restarts=self.q_restarts,
            )
        init = self.estimate
        if self.fitted:
            init = EstimatedParams.initial(
                self.estimate.n_events, self.estimate.n_devices, self.init_rng
            )
        return em_iterate(window, init, max_iters=self.max_iters, rng=self.q_rng, soft=self.soft)

    def update_posterior(self, obs: Observation) -> None:
        self.history.append(obs)
        window = self._training_window()
        if len(window) < 2:
            # too little data for EM; keep filtering under the current estimates
            super().update_posterior(obs)
        else:
            previous = self.estimate
            self.estimate = self._refit(window)
            self.fitted = True
            self.state.params_known = self.estimate
            self._p_ss = None
            if parameter_change(self.estimate, previous) <= settings.em_tolerance:
                super().update_posterior(obs)
            else:
                self.state.posterior = filter_trace(self.estimate, self.history).final()
            logger.debug(
                "Online estimate after %d slots took %d EM iterations",
                len(self.history),
                self.estimate.iterations_run,
            )
        if self.beta_every and len(self.history) % self.beta_every == 0:
            self.retune_beta()

    def retune_beta(self) -> float:
        """Re-tune beta from the current estimates, posterior and ages."""
        assert self.state.posterior is not None
        beta = lookahead_beta(
            self.estimate,
            self.n_slots,
            self.state.posterior,
            self.state.ages,
            self.beta_rng.child(f"slot-{len(self.history)}"),
            lookahead_candidates(self.beta),
            horizon=self.beta_lookahead,
            replications=self.beta_replications,
            p_ss_mode=self.p_ss_mode,
        )
        self.state.beta = beta
        self.beta_history.append((len(self.history), beta))
        logger.debug("Online beta after %d slots: %.4g", len(self.history), beta)
        return beta
