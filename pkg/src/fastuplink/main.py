"""FastAPI application entry point."""

import logging
from contextlib import asynccontextmanager

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from . import __version__
from .api.v1 import router as v1_router
from .config import get_settings
from .schedulers.registry import DEFAULT_POLICIES, POLICIES

logger = logging.getLogger(__name__)
settings = get_settings()


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Application lifespan events."""
    # Startup
    logger.info("Starting %s %s", settings.app_name, __version__)
    yield
    # Shutdown
    logger.info("Stopping %s", settings.app_name)


app = FastAPI(
    title="fastuplink",
    description="Fast uplink grant scheduling simulator for machine-type devices",
    version=__version__,
    lifespan=lifespan,
    docs_url="/docs",
    redoc_url="/redoc",
    openapi_url="/openapi.json",
)

# CORS middleware
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],  # open for local tooling; restrict when deployed
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Include API router
app.include_router(v1_router, prefix="/api")


@app.get("/health")
async def health_check():
    """Health check endpoint."""
    return {"status": "healthy", "version": __version__}


@app.get("/api-info")
async def api_info():
    """API information endpoint for discovering the simulator's surface."""
    # defaults come from Settings so FASTUPLINK_* overrides show up here
    return {
        "name": settings.app_name,
        "description": "Fast uplink grant scheduling simulator for machine-type devices",
        "version": __version__,
        "docs_url": "/docs",
        "redoc_url": "/redoc",
        "openapi_url": "/openapi.json",
        "api_prefix": settings.api_v1_prefix,
        "endpoints": {
            "simulate": f"{settings.api_v1_prefix}/experiments/simulate",
            "tune_beta": f"{settings.api_v1_prefix}/tuning/beta",
            "policies": f"{settings.api_v1_prefix}/policies",
        },
        "policies": list(POLICIES),
        "default_policies": DEFAULT_POLICIES,
        "defaults": {
            "n_events": settings.n_events,
            "n_devices": settings.n_devices,
            "n_slots": settings.n_slots,
            "horizon": settings.horizon,
            "em_max_iters": settings.em_max_iters,
            "beta": settings.beta,
        },
    }
