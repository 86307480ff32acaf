"""
Configuration system for lambda-moments.

Handles environment-based configuration with Pydantic Settings.
Every numerical tolerance used by the library defaults from here and can
still be overridden per call.
"""

import os
from enum import Enum
from functools import lru_cache
from typing import Literal

from pydantic import Field, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Environment(str, Enum):
    """Environment types for library execution."""

    DEVELOPMENT = "development"
    PRODUCTION = "production"


class Config(BaseSettings):
    """
    Library configuration with environment-based settings.

    Configuration priority:
    1. Environment variables (prefixed with ``LAMOM_``)
    2. Variables from .env file
    3. Default field values

    Example .env file:
        LAMOM_ENV=development
        LAMOM_DIM_LIMIT=4096
        LAMOM_LOG_LEVEL=DEBUG
    """

    model_config = SettingsConfigDict(
        env_prefix="LAMOM_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    env: Environment = Field(
        default=Environment.DEVELOPMENT,
        description="Runtime environment (development, production)",
    )

    # Size guard for tensor-power operators
    dim_limit: int = Field(
        default=2048,
        description="Largest allowed dimension of a d^k operator",
    )

    # Kernel tolerances
    herm_tol: float = Field(
        default=1e-10,
        description="Max entry residual accepted as Hermitian by the eigensolver",
    )

    # Density-matrix validation
    state_herm_tol: float = Field(
        default=1e-12,
        description="Hermiticity residual allowed for a density matrix",
    )
    state_trace_tol: float = Field(
        default=1e-12,
        description="Trace deviation from one allowed for a density matrix",
    )
    state_psd_tol: float = Field(
        default=1e-10,
        description="Magnitude of the most negative eigenvalue tolerated in a state",
    )

    # Maps
    map_check_tol: float = Field(
        default=1e-11,
        description="Residual for hermiticity-preservation and trace-scale checks",
    )
    map_check_samples: int = Field(
        default=100,
        description="Random operators used when verifying a map at construction",
    )
    degenerate_trace_tol: float = Field(
        default=1e-10,
        description="Normalization traces at or below this magnitude are degenerate",
    )

    # Moments and criteria
    rank_tol: float = Field(
        default=1e-10,
        description="Relative threshold for counting nonzero eigenvalues in q0",
    )
    moment_trace_tol: float = Field(
        default=1e-9,
        description="Trace deviation from one accepted when extracting moments",
    )
    psd_tol: float = Field(
        default=1e-9,
        description="Hankel PSD tolerance, scaled by the largest Hankel entry",
    )
    report_tol: float = Field(
        default=1e-9,
        description="Margin below -report_tol counts as entanglement detected",
    )
    oracle_restarts: int = Field(
        default=200,
        description="Random restarts of the local searches in the q3 oracle",
    )
    oracle_seed: int = Field(
        default=0,
        description="Seed of the q3 oracle's random restarts",
    )

    # Measurement simulation
    probability_tol: float = Field(
        default=1e-9,
        description="Allowed deviation of Born probabilities from unit total",
    )

    # Sweeps
    sweep_workers: int = Field(
        default=1,
        description="Thread count for sweep grids (1 evaluates serially)",
    )

    # General settings
    debug: bool = Field(
        default=False,
        description="Enable debug mode",
    )
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = Field(
        default="WARNING",
        description="Logging level",
    )

    @model_validator(mode="after")
    def validate_limits(self):
        """Reject non-positive limits and tolerances."""
        if self.dim_limit < 1:
            raise ValueError("LAMOM_DIM_LIMIT must be a positive integer")
        if self.sweep_workers < 1:
            raise ValueError("LAMOM_SWEEP_WORKERS must be a positive integer")
        tolerances = {
            name: getattr(self, name)
            for name in type(self).model_fields
            if name.endswith("_tol")
        }
        bad = [name for name, value in tolerances.items() if value <= 0]
        if bad:
            raise ValueError(f"Tolerances must be positive: {', '.join(bad)}")
        return self


@lru_cache
def get_config() -> Config:
    """
    Get cached configuration instance.

    Uses lru_cache to avoid repeated .env file reads.
    Clear cache with get_config.cache_clear() if needed.

    Returns:
        Cached Config instance
    """
    # Check for environment-specific .env file
    env = os.getenv("LAMOM_ENV", "development")
    env_file = f".env.{env}"

    if os.path.exists(env_file):
        return Config(_env_file=env_file)

    return Config()
