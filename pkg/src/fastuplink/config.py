"""Application configuration using pydantic-settings."""

from functools import lru_cache
from typing import Literal, Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Simulation defaults loaded from environment variables (prefix FASTUPLINK_)."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="FASTUPLINK_",
        extra="ignore",
    )

    # Application
    app_name: str = "fastuplink"
    debug: bool = False
    api_v1_prefix: str = "/api/v1"
    log_level: str = "INFO"

    # Cell dimensions
    n_events: int = 5
    n_devices: int = 50
    n_slots: int = 10
    horizon: int = 100

    # Scheduling
    beta: float = 0.0233
    p_ss_mode: Literal["mean", "max"] = "mean"  # over events

    # Estimation
    em_max_iters: int = 40
    em_tolerance: float = 1e-3
    em_min_iters: int = 2  # tolerance checked from this iteration on
    estimation_floor: float = 1e-4
    q_search_restarts: int = 3
    training_horizon: int = 100
    soft_em: bool = False
    online_warm_start: bool = True
    online_window: Optional[int] = None  # slots of history kept by the online learner
    online_em_iters: int = 2  # per-slot cap once a first fit exists
    online_q_restarts: int = 1
    online_beta_every: int = 10  # slots between beta re-tunes; 0 keeps beta fixed
    online_beta_lookahead: int = 20
    online_beta_replications: int = 4
    online_beta_grid_size: int = 8

    # Beta search
    beta_grid_size: int = 20
    beta_grid_min: float = 1e-4
    beta_max: float = 1.0
    beta_replications: int = 20
    beta_refine_iterations: int = 12

    # Execution
    output_dir: str = "results"
    workers: int = 1


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
