"""Application configuration module.

Reads numerical tolerances from ``LEVYHEAT_*`` environment variables.
"""

import os
import warnings
from functools import lru_cache

from dotenv import load_dotenv

from .models import Settings

# Load environment variables (don't override existing env vars)
load_dotenv(override=False)

_PREFIX = "LEVYHEAT_"


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(_PREFIX + name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return float(raw)
    except ValueError:
        raise ValueError(f"{_PREFIX}{name} must be a number, got {raw!r}") from None


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(_PREFIX + name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{_PREFIX}{name} must be an integer, got {raw!r}") from None


@lru_cache()
def get_settings() -> Settings:
    """Get application settings from environment variables.

    Uses LRU cache so settings are read once per process; call
    ``get_settings.cache_clear()`` after changing the environment.

    Returns:
        Settings: Numerical configuration.

    Raises:
        ValueError: If a variable is set but malformed.
    """
    defaults = Settings()
    cache_path = os.getenv(_PREFIX + "CACHE_PATH")
    if not cache_path:
        warnings.warn(
            f"{_PREFIX}CACHE_PATH not set. Using {defaults.CACHE_PATH}.",
            UserWarning,
        )
        cache_path = defaults.CACHE_PATH

    return Settings(
        MASS_TOL=_env_float("MASS_TOL", defaults.MASS_TOL),
        PSI_STAR_REL_TOL=_env_float("PSI_STAR_REL_TOL", defaults.PSI_STAR_REL_TOL),
        INVERSE_ABS_TOL=_env_float("INVERSE_ABS_TOL", defaults.INVERSE_ABS_TOL),
        SHELL_REL_TOL=_env_float("SHELL_REL_TOL", defaults.SHELL_REL_TOL),
        LIMIT_REL_TOL=_env_float("LIMIT_REL_TOL", defaults.LIMIT_REL_TOL),
        PASS_REL_TOL=_env_float("PASS_REL_TOL", defaults.PASS_REL_TOL),
        CUTOFF_EXPONENT=_env_float("CUTOFF_EXPONENT", defaults.CUTOFF_EXPONENT),
        QUAD_TAIL_TOL=_env_float("QUAD_TAIL_TOL", defaults.QUAD_TAIL_TOL),
        MC_BATCH=_env_int("MC_BATCH", defaults.MC_BATCH),
        CACHE_PATH=cache_path,
        THREADS=_env_int("THREADS", defaults.THREADS),
        LOG_CONFIG=os.getenv(_PREFIX + "LOG_CONFIG", defaults.LOG_CONFIG),
        LOG_LEVEL=os.getenv(_PREFIX + "LOG_LEVEL", defaults.LOG_LEVEL),
    )
