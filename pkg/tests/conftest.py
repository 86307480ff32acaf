"""
Pytest configuration for lambda-moments tests.
"""

import logging
import os
import sys
from pathlib import Path

import pytest

# Add src directory to path for imports
src_path = Path(__file__).parent.parent / "src"
sys.path.insert(0, str(src_path))

from lambda_moments.config import get_config  # noqa: E402


@pytest.fixture(autouse=True)
def isolate_environment(monkeypatch):
    """
    Isolate environment variables and the cached config for each test.

    This prevents tests from affecting each other through LAMOM_* vars.
    """
    original_env = dict(os.environ)
    for var in list(os.environ):
        if var.startswith("LAMOM_"):
            monkeypatch.delenv(var, raising=False)
    get_config.cache_clear()
    package_logger = logging.getLogger("lambda_moments")
    handlers = list(package_logger.handlers)
    propagate = package_logger.propagate
    level = package_logger.level

    yield

    package_logger.handlers = handlers
    package_logger.propagate = propagate
    package_logger.setLevel(level)

    os.environ.clear()
    os.environ.update(original_env)
    get_config.cache_clear()


@pytest.fixture
def rng():
    """Seeded numpy generator for randomized checks."""
    import numpy as np

    return np.random.default_rng(20240601)


@pytest.fixture
def state_file(tmp_path):
    """Write a DensityMatrix to a JSON state file and return its path."""
    from lambda_moments.states import to_file

    def _write(rho, name="state.json"):
        return to_file(rho, tmp_path / name)

    return _write
