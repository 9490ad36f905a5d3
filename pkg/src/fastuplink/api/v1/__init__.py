"""API v1 routes."""

from .router import router

__all__ = ["router"]
