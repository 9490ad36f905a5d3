"""Pytest fixtures for testing."""

from pathlib import Path
from typing import AsyncGenerator

import numpy as np
import pytest
import pytest_asyncio
from httpx import ASGITransport, AsyncClient

from fastuplink.main import app
from fastuplink.models import ModelParams, RngStream, Trajectory, generate_trajectory, sample_params
from fastuplink.schemas.experiment import ExperimentConfig

# Policies cheap enough to run on every test; the learning policies get their own tests.
FAST_POLICIES = ["tdma", "gf", "fu-genie", "fu-feedback", "fu-limited", "fu-baseline"]


@pytest.fixture
def rng() -> RngStream:
    """Seeded root stream."""
    return RngStream(seed=1234)


@pytest.fixture
def small_params() -> ModelParams:
    """N=2, K=6, L=2 cell drawn from a fixed seed."""
    return sample_params(2, 6, 2, rng=RngStream(7).child("params"))


@pytest.fixture
def small_trajectory(small_params: ModelParams) -> Trajectory:
    """40 slots of the small cell."""
    return generate_trajectory(small_params, 40, RngStream(11))


@pytest.fixture
def single_event_params() -> ModelParams:
    """One event, four devices, deterministic enough for hand arithmetic."""
    return ModelParams(
        n_events=1,
        n_devices=4,
        n_slots=2,
        eps0=np.array([0.2]),
        eps1=np.array([0.3]),
        q=np.array([[0.9, 0.5, 0.1, 0.0]]),
    )


@pytest.fixture
def tiny_config(tmp_path: Path) -> ExperimentConfig:
    """Two seeds of a small cell with the fast policies."""
    return ExperimentConfig(
        n_events=2,
        n_devices=8,
        n_slots=2,
        horizon=20,
        seeds=[0, 1],
        policies=list(FAST_POLICIES),
        beta=0.0233,
        output_dir=str(tmp_path / "results"),
    )


@pytest_asyncio.fixture(scope="function")
async def client() -> AsyncGenerator[AsyncClient, None]:
    """Create test client for the ASGI app."""
    transport = ASGITransport(app=app)
    async with AsyncClient(transport=transport, base_url="http://test") as client:
        yield client
