"""Experiment configuration schema and config file loading."""

from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

import numpy as np
import yaml
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from ..config import get_settings
from ..schedulers.registry import DEFAULT_POLICIES, POLICIES

settings = get_settings()


class ConfigError(ValueError):
    """An experiment configuration could not be read or did not validate."""

    def __init__(self, message: str, errors: Optional[List[str]] = None):
        self.errors = errors or []
        detail = "; ".join(self.errors)
        super().__init__(f"{message}: {detail}" if detail else message)

    @classmethod
    def from_validation(cls, exc: ValidationError, source: str = "config") -> "ConfigError":
        errors = [
            f"{'.'.join(str(part) for part in err['loc']) or '<root>'}: {err['msg']}"
            for err in exc.errors()
        ]
        return cls(f"Invalid {source}", errors)


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class ExperimentConfig(BaseModel):
    """One experiment: a cell, a set of seeds and the policies to compare on them."""

    model_config = {"extra": "forbid"}

    n_events: int = Field(settings.n_events, ge=1, le=16, description="Hidden events N")
    n_devices: int = Field(settings.n_devices, ge=1, description="Devices K")
    n_slots: int = Field(settings.n_slots, ge=1, description="Grants per slot L")
    horizon: int = Field(settings.horizon, ge=1, description="Slots per run T")
    seeds: List[int] = Field(default_factory=lambda: [0], min_length=1)
    policies: List[str] = Field(default_factory=lambda: list(DEFAULT_POLICIES), min_length=1)
    beta: Union[float, Literal["optimize"]] = Field(
        settings.beta, description="Age weight of the AoI policies, or 'optimize'"
    )
    em_max_iters: int = Field(settings.em_max_iters, ge=1, description="EM iteration cap Z")
    params_source: Literal["sample", "explicit"] = "sample"
    eps_high: float = Field(0.5, gt=0.0, le=1.0, description="Upper bound of sampled eps")
    eps0: Optional[List[float]] = None
    eps1: Optional[List[float]] = None
    q: Optional[List[List[float]]] = None
    p_ss_mode: Literal["mean", "max"] = settings.p_ss_mode
    training_horizon: int = Field(settings.training_horizon, ge=2)
    soft_em: bool = settings.soft_em
    online_warm_start: bool = settings.online_warm_start
    online_window: Optional[int] = Field(settings.online_window, ge=2)
    online_em_iters: int = Field(settings.online_em_iters, ge=1)
    online_beta_every: int = Field(
        settings.online_beta_every, ge=0, description="Slots between online beta re-tunes"
    )
    beta_tuning_policy: str = "fu-feedback"
    beta_replications: int = Field(settings.beta_replications, ge=1)
    output_dir: str = settings.output_dir
    formats: List[OutputFormat] = Field(default_factory=lambda: [OutputFormat.CSV])
    workers: int = Field(settings.workers, ge=1)

    @field_validator("policies")
    @classmethod
    def validate_policies(cls, v: List[str]) -> List[str]:
        unknown = [name for name in v if name not in POLICIES]
        if unknown:
            raise ValueError(
                f"Unknown policies {unknown}. Must be among: {', '.join(POLICIES)}"
            )
        if len(set(v)) != len(v):
            raise ValueError("Policies must not repeat")
        return v

    @field_validator("beta")
    @classmethod
    def validate_beta(cls, v: Union[float, str]) -> Union[float, str]:
        if isinstance(v, float) and v < 0:
            raise ValueError("beta must be nonnegative")
        return v

    @field_validator("beta_tuning_policy")
    @classmethod
    def validate_tuning_policy(cls, v: str) -> str:
        if v not in POLICIES or v in ("tdma", "gf"):
            raise ValueError("beta can only be tuned on a fast uplink policy")
        return v

    @model_validator(mode="after")
    def check_dimensions(self) -> "ExperimentConfig":
        if self.n_slots > self.n_devices:
            raise ValueError(
                f"n_slots ({self.n_slots}) cannot exceed n_devices ({self.n_devices})"
            )
        if self.params_source == "explicit":
            if self.eps0 is None or self.eps1 is None or self.q is None:
                raise ValueError("Explicit parameters need eps0, eps1 and q")
        for name, values, shape in (
            ("eps0", self.eps0, (self.n_events,)),
            ("eps1", self.eps1, (self.n_events,)),
            ("q", self.q, (self.n_events, self.n_devices)),
        ):
            if values is None:
                continue
            array = np.asarray(values, dtype=np.float64)
            if array.shape != shape:
                raise ValueError(f"{name} must have shape {shape}, got {array.shape}")
            if np.any((array < 0.0) | (array > 1.0)):
                raise ValueError(f"{name} entries must lie in [0, 1]")
        return self

    @property
    def optimize_beta(self) -> bool:
        return self.beta == "optimize"

    def with_overrides(self, **overrides: Any) -> "ExperimentConfig":
        """A validated copy with the non-None overrides applied."""
        data = self.model_dump()
        data.update({key: value for key, value in overrides.items() if value is not None})
        try:
            return ExperimentConfig.model_validate(data)
        except ValidationError as exc:
            raise ConfigError.from_validation(exc) from exc


def parse_config(data: Dict[str, Any], source: str = "config") -> ExperimentConfig:
    """Validate a mapping; a run manifest's echoed config is unwrapped first."""
    if isinstance(data, dict) and isinstance(data.get("config"), dict):
        data = data["config"]
    if not isinstance(data, dict):
        raise ConfigError(f"{source} must be a key-value mapping")
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError.from_validation(exc, source) from exc


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    """Read a YAML or JSON config file (a manifest.json works too)."""
    path = Path(path)
    try:
        with path.open(encoding="utf-8") as handle:
            data = yaml.safe_load(handle) or {}
    except OSError as exc:
        raise ConfigError(f"Cannot read config file {path}: {exc.strerror}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"Config file {path} is not valid YAML or JSON: {exc}") from exc
    return parse_config(data, source=str(path))
