"""
Shared fixtures for the heisgeom test scripts.

Hypothesis profiles: "ci" (default, derandomized) and "dev"
(select with HYPOTHESIS_PROFILE=dev).
"""
import os
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings as hypothesis_settings

# Add parent to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from app.config import settings  # noqa: E402

SCENE_DIR = Path(__file__).parent.parent / "docs" / "scenes"

hypothesis_settings.register_profile(
    "ci", max_examples=40, deadline=None, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
hypothesis_settings.register_profile("dev", max_examples=200, deadline=None)
hypothesis_settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "ci"))


@pytest.fixture(autouse=True)
def restore_settings():
    """Command-line overrides mutate the global settings; undo them after each test"""
    saved = settings.model_dump()
    yield
    for key, value in saved.items():
        setattr(settings, key, value)


@pytest.fixture
def scene_path():
    def resolve(name: str) -> Path:
        return SCENE_DIR / f"{name}.json"
    return resolve


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
