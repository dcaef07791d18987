import numpy as np
import pytest
from hypothesis import settings

from satkf.core.config import ExperimentConfig, get_settings
from satkf.estimation.harness import build_model

settings.register_profile("satkf", database=None, max_examples=50, deadline=None)
settings.load_profile("satkf")


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    for name in ("SATKF_LOG_LEVEL", "SATKF_WORKERS", "SATKF_OUT_DIR"):
        monkeypatch.delenv(name, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def type1_cfg() -> ExperimentConfig:
    return ExperimentConfig(mtype="type1")


@pytest.fixture
def type2_cfg() -> ExperimentConfig:
    return ExperimentConfig(mtype="type2")


@pytest.fixture
def noisy_type2_cfg() -> ExperimentConfig:
    """type 2 with a full-rank process covariance, so the Riccati fixed point is stabilizing"""
    return ExperimentConfig(mtype="type2", delta_q=1e-3)


@pytest.fixture
def F(type1_cfg) -> np.ndarray:
    return build_model(type1_cfg).F
