"""Experiment runner: one shared trajectory per seed, replayed against every policy."""

import logging
import time
from dataclasses import dataclass, field
from functools import partial
from typing import Dict, List, Optional

import numpy as np

from .. import __version__
from ..metrics.trace import MetricsTrace
from ..models.params import ModelParams, sample_params
from ..models.rng import RngStream
from ..models.trajectory import Trajectory, generate_trajectory
from ..schedulers.registry import AOI_POLICIES, get_scheduler
from ..schemas.experiment import ExperimentConfig
from ..simulation import replay
from ..tuning.beta_search import BetaSearchConfig, BetaSearchResult, optimize_beta
from ..workers.pool import fan_out

logger = logging.getLogger(__name__)


@dataclass
class RunResult:
    """Every policy's metrics on one seed's trajectory."""

    seed: int
    params: ModelParams
    beta: float
    metrics: Dict[str, MetricsTrace]
    wall_time: Dict[str, float] = field(default_factory=dict)
    beta_search: Optional[BetaSearchResult] = None
    trajectory: Optional[Trajectory] = None

    @property
    def policies(self) -> List[str]:
        return list(self.metrics)

    def regret_series(self, policy: str) -> np.ndarray:
        return self.metrics[policy].regret_series

    def aoi_series(self, policy: str) -> np.ndarray:
        return self.metrics[policy].aoi_series

    def final_usage(self, policy: str) -> float:
        return self.metrics[policy].final_usage

    def totals(self) -> List[Dict[str, object]]:
        """One row per policy: final cumulative regret, mean AoI, final usage."""
        return [
            {
                "seed": self.seed,
                "policy": policy,
                "beta": self.beta if policy in AOI_POLICIES else 0.0,
                "regret_cum": m.cumulative_regret,
                "aoi_mean": m.mean_aoi,
                "aoi_peak": int(max((r.aoi_peak for r in m.records), default=0)),
                "usage": m.final_usage,
            }
            for policy, m in self.metrics.items()
        ]


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    runs: List[RunResult]
    version: str = __version__

    @property
    def seeds(self) -> List[int]:
        return [run.seed for run in self.runs]

    @property
    def policies(self) -> List[str]:
        return list(self.config.policies)


def cell_params(config: ExperimentConfig, root: RngStream) -> ModelParams:
    """The seed's ground truth: the explicit arrays, or a draw from the params substream."""
    if config.params_source == "explicit":
        return ModelParams(
            config.n_events,
            config.n_devices,
            config.n_slots,
            np.asarray(config.eps0),
            np.asarray(config.eps1),
            np.asarray(config.q),
        )
    return sample_params(
        config.n_events,
        config.n_devices,
        config.n_slots,
        rng=root.child("params"),
        eps_high=config.eps_high,
    )


def beta_search_config(config: ExperimentConfig, seed: int) -> BetaSearchConfig:
    return BetaSearchConfig(
        policy=config.beta_tuning_policy,
        replications=config.beta_replications,
        horizon=config.horizon,
        seed=seed,
        p_ss_mode=config.p_ss_mode,
        policy_options=policy_options(config),
    )


def policy_options(config: ExperimentConfig) -> Dict[str, object]:
    return {
        "max_iters": config.em_max_iters,
        "training_horizon": config.training_horizon,
        "window": config.online_window,
        "warm_start": config.online_warm_start,
        "soft": config.soft_em,
        "online_iters": config.online_em_iters,
        "beta_every": config.online_beta_every,
    }


def run_seed(config: ExperimentConfig, seed: int, keep_trajectory: bool = False) -> RunResult:
    """Draw the cell, simulate it once and replay that truth against every policy."""
    root = RngStream(seed)
    params = cell_params(config, root)

    search: Optional[BetaSearchResult] = None
    if config.optimize_beta:
        search = optimize_beta(beta_search_config(config, seed), params)
        beta = search.beta
    else:
        beta = float(config.beta)

    trajectory = generate_trajectory(params, config.horizon, root)
    metrics: Dict[str, MetricsTrace] = {}
    wall_time: Dict[str, float] = {}
    for policy in config.policies:
        started = time.perf_counter()
        scheduler = get_scheduler(
            policy,
            params,
            beta=beta if policy in AOI_POLICIES else None,
            rng=root.child(policy),
            p_ss_mode=config.p_ss_mode,
            **policy_options(config),
        )
        metrics[policy] = replay(trajectory, scheduler, rng=root.child("gf-choices"))
        wall_time[policy] = time.perf_counter() - started
        logger.debug(
            "Seed %d %s: cumulative regret %d in %.2fs",
            seed,
            policy,
            metrics[policy].cumulative_regret,
            wall_time[policy],
        )

    logger.info("Seed %d finished (%d policies)", seed, len(metrics))
    return RunResult(
        seed=seed,
        params=params,
        beta=beta,
        metrics=metrics,
        wall_time=wall_time,
        beta_search=search,
        trajectory=trajectory if keep_trajectory else None,
    )


class ExperimentService:
    """Runs a configured experiment across its seeds."""

    def __init__(self, config: ExperimentConfig):
        self.config = config

    def run(self, keep_trajectories: bool = False) -> ExperimentResult:
        logger.info(
            "Running %d policies on %d seeds (N=%d, K=%d, L=%d, T=%d)",
            len(self.config.policies),
            len(self.config.seeds),
            self.config.n_events,
            self.config.n_devices,
            self.config.n_slots,
            self.config.horizon,
        )
        task = partial(run_seed, self.config, keep_trajectory=keep_trajectories)
        runs = fan_out(task, list(self.config.seeds), self.config.workers)
        return ExperimentResult(config=self.config, runs=runs)


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    return ExperimentService(config).run()
