"""Policy registry endpoint."""

from typing import List

from fastapi import APIRouter

from ...schedulers.registry import describe_policies
from ...schemas.results import PolicyInfo

router = APIRouter(prefix="/policies", tags=["policies"])


@router.get("", response_model=List[PolicyInfo])
async def list_policies() -> List[dict]:
    """Every grant policy that can be named in an experiment."""
    return describe_policies()
