"""API request and response schemas."""

from typing import List, Optional

from pydantic import BaseModel, Field, field_validator

from ..config import get_settings
from ..schedulers.registry import POLICIES

settings = get_settings()


class PolicySummary(BaseModel):
    """Seed-averaged totals of one policy."""

    policy: str
    regret_cum: float
    regret_cum_median: float
    aoi_mean: float
    usage: float
    seeds: int
    low_confidence: bool


class SeedTotals(BaseModel):
    seed: int
    policy: str
    beta: float
    regret_cum: int
    aoi_mean: float
    aoi_peak: int
    usage: float


class RegretRatio(BaseModel):
    numerator: str
    denominator: str
    regret_ratio: Optional[float]
    median_seed_ratio: Optional[float]


class SimulateResponse(BaseModel):
    summary: List[PolicySummary]
    ratios: List[RegretRatio] = Field(default_factory=list)
    runs: List[SeedTotals]
    low_confidence: bool


class BetaSearchRequest(BaseModel):
    """Tune beta on one cell drawn from seed (or the explicit parameters of a config)."""

    policy: str = "fu-feedback"
    seed: int = 0
    n_events: int = Field(settings.n_events, ge=1, le=16)
    n_devices: int = Field(settings.n_devices, ge=1)
    n_slots: int = Field(settings.n_slots, ge=1)
    horizon: int = Field(settings.horizon, ge=1)
    replications: int = Field(settings.beta_replications, ge=1)
    grid: Optional[List[float]] = None
    beta_max: float = Field(settings.beta_max, ge=0.0)

    @field_validator("policy")
    @classmethod
    def validate_policy(cls, v: str) -> str:
        if v not in POLICIES or v in ("tdma", "gf"):
            raise ValueError("beta can only be tuned on a fast uplink policy")
        return v

    @field_validator("grid")
    @classmethod
    def validate_grid(cls, v: Optional[List[float]]) -> Optional[List[float]]:
        if v is not None and (not v or any(beta < 0 for beta in v)):
            raise ValueError("grid must be a nonempty list of nonnegative values")
        return v


class BetaEvaluationResponse(BaseModel):
    beta: float
    avg_regret: float
    avg_aoi: float
    cost: float


class BetaSearchResponse(BaseModel):
    beta: float
    cost: float
    bracketed: bool
    warning: Optional[str] = None
    grid: List[BetaEvaluationResponse]
    refinements: List[BetaEvaluationResponse] = Field(default_factory=list)


class PolicyInfo(BaseModel):
    name: str
    description: str
    observation_model: str
