"""Process-level settings for the reconstruction toolkit using Pydantic v2.

These settings control the ambient behaviour of a run (logging, metrics,
numerical defaults) and are read from the environment or a ``.env`` file.
Pipeline parameters (geometry, noise, filter, grid) live in ``RunConfig``
and are parsed from the run configuration file instead.

Environment Variable Naming:
- REGFM_<FIELD>=value (e.g., REGFM_LOG_LEVEL=DEBUG, REGFM_LOG_FORMAT=json)
"""

# pylint: disable=too-few-public-methods
import logging
from functools import lru_cache
from typing import Literal, Optional

from pydantic import ConfigDict, Field, field_validator
from pydantic_settings import BaseSettings

logger = logging.getLogger(__name__)


class AppSettings(BaseSettings):
    """Main process configuration."""

    app_name: str = Field(default="regfm", description="Application name")

    # Logging
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = Field(
        default="INFO", description="Logging level"
    )
    log_format: Literal["json", "text"] = Field(default="text", description="Log format")
    log_file: Optional[str] = Field(
        default=None, description="Optional rotating log file in addition to stderr"
    )

    # Numerics
    default_clamp_rel: float = Field(
        default=1e-14,
        description="Relative eigenvalue clamp used when a run config does not set one",
    )

    # Metrics
    metrics_enabled: bool = Field(default=True, description="Record Prometheus metrics")

    @field_validator("log_level", mode="before")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Normalise the log level to upper case."""
        return v.upper() if isinstance(v, str) else v

    @field_validator("default_clamp_rel")
    @classmethod
    def validate_clamp(cls, v: float) -> float:
        """Clamp must be a small non-negative relative threshold."""
        if not 0.0 <= v < 1.0:
            raise ValueError(f"default_clamp_rel must lie in [0, 1), got {v}")
        return v

    model_config = ConfigDict(
        extra="ignore",
        case_sensitive=False,
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="REGFM_",
    )


@lru_cache(maxsize=1)
def get_settings() -> AppSettings:
    """
    Get or create the process settings.

    Cached so every module sees the same instance for the lifetime of the
    process.

    Returns:
        AppSettings: The validated settings instance.

    Raises:
        ValidationError: If environment values are invalid.
    """
    settings = AppSettings()
    logger.debug(
        "Settings loaded: log_level=%s, log_format=%s, clamp_rel=%g",
        settings.log_level,
        settings.log_format,
        settings.default_clamp_rel,
    )
    return settings
