"""API dependencies for dependency injection."""

from typing import Annotated

from fastapi import Depends

from ..config import Settings, get_settings
from ..schemas.experiment import ExperimentConfig
from ..services.experiment_service import ExperimentService

SettingsDep = Annotated[Settings, Depends(get_settings)]


# Service factory dependencies
def get_experiment_service(config: ExperimentConfig) -> ExperimentService:
    return ExperimentService(config)


ExperimentServiceDep = Annotated[ExperimentService, Depends(get_experiment_service)]
