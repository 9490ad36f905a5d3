"""Pydantic schemas for experiment configs and API request/response validation."""

from .experiment import ConfigError, ExperimentConfig, OutputFormat, load_config, parse_config
from .results import (
    BetaEvaluationResponse,
    BetaSearchRequest,
    BetaSearchResponse,
    PolicyInfo,
    PolicySummary,
    RegretRatio,
    SeedTotals,
    SimulateResponse,
)

__all__ = [
    "BetaEvaluationResponse",
    "BetaSearchRequest",
    "BetaSearchResponse",
    "ConfigError",
    "ExperimentConfig",
    "OutputFormat",
    "PolicyInfo",
    "PolicySummary",
    "RegretRatio",
    "SeedTotals",
    "SimulateResponse",
    "load_config",
    "parse_config",
]
