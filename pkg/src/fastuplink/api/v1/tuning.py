"""Beta tuning endpoint."""

from fastapi import APIRouter, HTTPException, status
from fastapi.concurrency import run_in_threadpool

from ...models.params import ContractViolationError, UndefinedSteadyStateError, sample_params
from ...models.rng import RngStream
from ...schemas.results import BetaSearchRequest, BetaSearchResponse
from ...tuning.beta_search import BetaSearchConfig, optimize_beta

router = APIRouter(prefix="/tuning", tags=["tuning"])


@router.post("/beta", response_model=BetaSearchResponse)
async def tune_beta(request: BetaSearchRequest):
    """
    Minimize regret times age over beta for a cell drawn from the request seed.

    The response lists every grid point and refinement evaluated.
    """
    if request.n_slots > request.n_devices:
        raise HTTPException(
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            detail="n_slots cannot exceed n_devices",
        )
    try:
        params = sample_params(
            request.n_events,
            request.n_devices,
            request.n_slots,
            rng=RngStream(request.seed).child("params"),
        )
        config = BetaSearchConfig(
            policy=request.policy,
            replications=request.replications,
            horizon=request.horizon,
            seed=request.seed,
            grid=request.grid,
            beta_max=request.beta_max,
        )
        result = await run_in_threadpool(optimize_beta, config, params)
    except (ContractViolationError, UndefinedSteadyStateError) as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))

    return BetaSearchResponse(
        beta=result.beta,
        cost=result.cost,
        bracketed=result.bracketed,
        warning=result.warning,
        grid=[e.to_dict() for e in result.grid],
        refinements=[e.to_dict() for e in result.refinements],
    )
