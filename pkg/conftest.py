"""
Shared fixtures for the seesaw test suite.
"""

import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings as hypothesis_settings

# Add the package root to path
sys.path.insert(0, str(Path(__file__).parent))

from seesaw.models.regimes import (  # noqa: E402
    AsymmetricNormalModel,
    EquicorrelatedModel,
    StudentTModel,
    SymmetricNormalModel,
)

hypothesis_settings.register_profile("seesaw", deadline=None, max_examples=60)
hypothesis_settings.load_profile("seesaw")


@pytest.fixture
def sym_model():
    """Symmetric model with mu=-1, sigma=1, rho=0 (threshold 0.31136, z*=1)."""
    return SymmetricNormalModel(mu=-1.0, sigma=1.0, rho=0.0)


@pytest.fixture
def asym_model():
    return AsymmetricNormalModel(mu_u=-1.0, mu_v=-2.0, sigma_u=1.0, sigma_v=2.0, rho=-0.3)


@pytest.fixture
def multi_model():
    return EquicorrelatedModel(n=3, mu=-1.0, sigma=1.0, rho=0.0)


@pytest.fixture
def t_model():
    return StudentTModel(mu=-1.0, sigma=1.0, rho=0.0, delta=5.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)
