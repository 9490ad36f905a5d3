"""Monte Carlo tuning of the age weight beta.

Every candidate is scored on the same replications (common random numbers), so
differences between candidates come from beta alone.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import partial
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..config import get_settings
from ..estimation.golden import golden_section_min
from ..metrics.regret import cost
from ..models.params import ContractViolationError, ModelParams
from ..models.rng import RngStream
from ..models.trajectory import Trajectory, generate_trajectory
from ..schedulers.base import check_beta
from ..schedulers.registry import get_scheduler
from ..simulation import replay
from ..workers.pool import fan_out

logger = logging.getLogger(__name__)
settings = get_settings()


@dataclass
class BetaSearchConfig:
    """What to tune, on how many replications, over which candidates."""

    policy: str = "fu-feedback"
    replications: int = settings.beta_replications
    horizon: int = settings.horizon
    seed: int = 0
    grid: Optional[Sequence[float]] = None
    grid_size: int = settings.beta_grid_size
    grid_min: float = settings.beta_grid_min
    beta_max: float = settings.beta_max
    refine_evals: int = settings.beta_refine_iterations
    p_ss_mode: Optional[str] = None
    workers: int = 1
    policy_options: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.replications < 1:
            raise ContractViolationError("replications must be at least 1")
        if self.horizon < 1:
            raise ContractViolationError("horizon must be at least 1")
        check_beta(self.beta_max)
        if self.grid is not None:
            for beta in self.grid:
                check_beta(beta)

    def candidates(self) -> np.ndarray:
        """Sorted candidate grid: 0 plus log-spaced points up to beta_max."""
        if self.grid is not None:
            grid = np.asarray(self.grid, dtype=np.float64)
        elif self.beta_max <= self.grid_min:
            grid = np.array([0.0, self.beta_max])
        else:
            logspaced = np.logspace(
                math.log10(self.grid_min), math.log10(self.beta_max), self.grid_size
            )
            grid = np.concatenate([[0.0], logspaced])
        return np.unique(np.clip(grid, 0.0, self.beta_max))


@dataclass
class BetaEvaluation:
    beta: float
    avg_regret: float
    avg_aoi: float
    cost: float

    def to_dict(self) -> Dict[str, float]:
        return {
            "beta": self.beta,
            "avg_regret": self.avg_regret,
            "avg_aoi": self.avg_aoi,
            "cost": self.cost,
        }


@dataclass
class BetaSearchResult:
    """The chosen beta and every evaluation that led to it."""

    beta: float
    cost: float
    grid: List[BetaEvaluation]
    refinements: List[BetaEvaluation] = field(default_factory=list)
    bracketed: bool = True

    @property
    def warning(self) -> Optional[str]:
        if self.bracketed:
            return None
        return "Grid minimum is not bracketed; returned the grid argmin without refinement"


def replications(config: BetaSearchConfig, params: ModelParams) -> List[Trajectory]:
    """The common trajectories every candidate is scored on."""
    stream = RngStream(config.seed).child("beta-search")
    return [
        generate_trajectory(params, config.horizon, stream.child(f"replication-{r}"))
        for r in range(config.replications)
    ]


def _score_replication(
    beta: float,
    config: BetaSearchConfig,
    params: ModelParams,
    r: int,
    trajectory: Trajectory,
) -> tuple[float, float]:
    stream = RngStream(config.seed).child("beta-search").child(f"replication-{r}")
    scheduler = get_scheduler(
        config.policy,
        params,
        beta=beta,
        rng=stream.child(config.policy),
        p_ss_mode=config.p_ss_mode,
        **config.policy_options,
    )
    metrics = replay(trajectory, scheduler, rng=stream.child("gf-choices"))
    return metrics.average_regret, metrics.mean_aoi


def evaluate_beta(
    beta: float,
    config: BetaSearchConfig,
    params: ModelParams,
    trajectories: Optional[List[Trajectory]] = None,
) -> BetaEvaluation:
    """Replication-averaged regret per slot, AoI and their product for one beta."""
    beta = check_beta(beta)
    trajectories = trajectories if trajectories is not None else replications(config, params)
    scores = [
        _score_replication(beta, config, params, r, trajectory)
        for r, trajectory in enumerate(trajectories)
    ]
    avg_regret = float(np.mean([s[0] for s in scores]))
    avg_aoi = float(np.mean([s[1] for s in scores]))
    return BetaEvaluation(beta, avg_regret, avg_aoi, cost(avg_regret, avg_aoi))


def _evaluate_many(
    betas: Sequence[float],
    config: BetaSearchConfig,
    params: ModelParams,
    trajectories: List[Trajectory],
) -> List[BetaEvaluation]:
    task = partial(evaluate_beta, config=config, params=params, trajectories=trajectories)
    return fan_out(task, [float(b) for b in betas], config.workers)


def optimize_beta(config: BetaSearchConfig, params: ModelParams) -> BetaSearchResult:
    """
    Coarse grid scan, then golden-section refinement between the neighbours of the
    grid minimum. Ties on the grid go to the smaller beta.
    """
    trajectories = replications(config, params)
    grid = _evaluate_many(config.candidates(), config, params, trajectories)
    costs = np.array([e.cost for e in grid])
    best = int(np.argmin(costs))
    logger.info(
        "Beta grid scan on %s: minimum cost %.4g at beta=%.4g",
        config.policy,
        grid[best].cost,
        grid[best].beta,
    )

    if best == 0 or best == len(grid) - 1:
        logger.warning(
            "Beta cost minimum at the grid edge (beta=%.4g); skipping refinement",
            grid[best].beta,
        )
        return BetaSearchResult(grid[best].beta, grid[best].cost, grid, bracketed=False)

    refinements: List[BetaEvaluation] = []

    def objective(beta: float) -> float:
        evaluation = evaluate_beta(beta, config, params, trajectories)
        refinements.append(evaluation)
        return evaluation.cost

    low, high = grid[best - 1].beta, grid[best + 1].beta
    beta_star, cost_star = golden_section_min(objective, low, high, config.refine_evals)
    if cost_star < grid[best].cost:
        logger.info("Refined beta=%.4g with cost %.4g", beta_star, cost_star)
        return BetaSearchResult(beta_star, cost_star, grid, refinements)
    return BetaSearchResult(grid[best].beta, grid[best].cost, grid, refinements)


def achievable_region(
    beta_list: Sequence[float],
    config: BetaSearchConfig,
    params: ModelParams,
) -> List[BetaEvaluation]:
    """One (regret, age) point per beta, all on the same replications."""
    for beta in beta_list:
        check_beta(beta)
    trajectories = replications(config, params)
    return _evaluate_many(beta_list, config, params, trajectories)
