"""Experiment API endpoints."""

import math
from typing import Any, Dict, List

import numpy as np
import pandas as pd
from fastapi import APIRouter, HTTPException, status
from fastapi.concurrency import run_in_threadpool

from ..deps import ExperimentServiceDep
from ...inference.filter import InconsistentObservationError
from ...models.params import ContractViolationError, UndefinedSteadyStateError
from ...schemas.results import SimulateResponse
from ...services.report_service import compare_report, totals_frame

router = APIRouter(prefix="/experiments", tags=["experiments"])


def _plain(value: Any) -> Any:
    value = value.item() if isinstance(value, np.generic) else value
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _records(frame: pd.DataFrame) -> List[Dict[str, Any]]:
    return [
        {key: _plain(value) for key, value in row.items()}
        for row in frame.to_dict(orient="records")
    ]


@router.post("/simulate", response_model=SimulateResponse)
async def simulate(service: ExperimentServiceDep):
    """
    Run the experiment and return the per-policy comparison.

    Synchronous: the response arrives when every seed has been simulated. No
    result files are written.
    """
    try:
        result = await run_in_threadpool(service.run)
    except (ContractViolationError, UndefinedSteadyStateError, InconsistentObservationError) as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))

    runs = _records(totals_frame(result))
    if len(result.policies) < 2:
        # nothing to compare against; per-seed totals only
        return SimulateResponse(summary=[], runs=runs, low_confidence=len(result.runs) < 2)

    report = compare_report(result)
    return SimulateResponse(
        summary=_records(report.summary),
        ratios=_records(report.ratios),
        runs=runs,
        low_confidence=report.low_confidence,
    )
