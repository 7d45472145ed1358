"""Shared fixtures for the regfm test suite.

This module provides:
- Seeded random generators and small Hermitian test operators
- A reduced-size run configuration that keeps pipeline tests fast
- Settings cache isolation between tests

Usage:
    fixtures are automatically available to all tests via pytest's
    fixture discovery mechanism.
"""

import numpy as np
import pytest

from src.config import get_settings
from src.core.perturb_verify import random_psd
from src.models.run_config import RunConfig
from src.services.config_parser import parse_config

SMALL_RUN = """
# reduced star experiment
wave.directions = 16
quad.radial = 12
quad.angular = 32
quad.boundary = 64
grid.nx = 24
grid.ny = 24
noise.delta = 0.01
noise.seed = 3
filter.kind = tikhonov
filter.alpha = 1e-3
verify.dims = 6
verify.deltas = 1e-3
verify.trials = 3
"""


@pytest.fixture(autouse=True)
def clear_settings_cache():
    """Give every test a fresh ``AppSettings``."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def rng():
    """Deterministic generator."""
    return np.random.default_rng(1234)


@pytest.fixture
def psd_matrix():
    """8x8 Hermitian PSD operator with eigenvalues 0.5^n."""
    return random_psd(8, seed=7, decay=0.5)


@pytest.fixture
def complex_vector(rng):
    """Random complex vector of length 8."""
    return rng.standard_normal(8) + 1j * rng.standard_normal(8)


@pytest.fixture(scope="session")
def small_run_text():
    """Configuration text of the reduced experiment."""
    return SMALL_RUN


@pytest.fixture(scope="session")
def small_config() -> RunConfig:
    """Reduced experiment as a validated ``RunConfig``."""
    return parse_config(SMALL_RUN)
