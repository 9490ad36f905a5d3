"""Main v1 API router combining all endpoints."""

from fastapi import APIRouter

from . import experiments, policies, tuning

router = APIRouter(prefix="/v1")

router.include_router(experiments.router)
router.include_router(tuning.router)
router.include_router(policies.router)
