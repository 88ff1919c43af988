# cliqueperc/config.py
"""
Centralized runtime settings with environment variable fallbacks.

Explicit function arguments always take precedence over these values.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

DEFAULT_TAIL_MASS = 1e-12
DEFAULT_RETRY_PASSES = 100
DEFAULT_GIANT_THRESHOLD = 0.05
DEFAULT_FIXED_POINT_TOL = 1e-10
DEFAULT_FIXED_POINT_MAX_ITER = 100_000


def env_int(name: str, default: int) -> int:
    v = os.getenv(name)
    if v is None or not v.strip():
        return default
    return int(v)


def env_float(name: str, default: float) -> float:
    v = os.getenv(name)
    if v is None or not v.strip():
        return default
    return float(v)


@dataclass(frozen=True)
class RuntimeSettings:
    """Process-wide defaults for simulation and numerics."""

    workers: int = 1
    tail_mass: float = DEFAULT_TAIL_MASS
    retry_passes: int = DEFAULT_RETRY_PASSES
    log_level: str = "WARNING"


def get_settings() -> RuntimeSettings:
    """Resolve settings from the environment."""
    return RuntimeSettings(
        workers=max(1, env_int("CLIQUEPERC_WORKERS", 1)),
        tail_mass=env_float("CLIQUEPERC_TAIL_MASS", DEFAULT_TAIL_MASS),
        retry_passes=max(0, env_int("CLIQUEPERC_RETRY_PASSES", DEFAULT_RETRY_PASSES)),
        log_level=os.getenv("CLIQUEPERC_LOG_LEVEL", "WARNING").upper(),
    )
