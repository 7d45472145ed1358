"""Observability module for the reconstruction toolkit.

Metrics are imported on demand so that the numerical core keeps working
when prometheus-client is not installed; in that case the helpers below
degrade to no-ops.
"""

import logging
import sys

logger = logging.getLogger(__name__)

try:
    from src.observability.metrics import (
        track_bound_check,
        track_reconstruction,
        track_retained_modes,
        track_stage,
        write_metrics_file,
    )
    METRICS_AVAILABLE = True
except ImportError as e:
    sys.stderr.write(f"Warning: Prometheus metrics unavailable: {e}\n")
    sys.stderr.flush()
    logger.warning("Metrics module unavailable: %s. Prometheus metrics disabled.", e)
    METRICS_AVAILABLE = False

    def track_stage(*_args, **_kwargs):
        """No-op fallback when Prometheus is unavailable."""
        return lambda f: f

    def track_bound_check(*_args, **_kwargs):
        """No-op fallback when Prometheus is unavailable."""

    def track_reconstruction(*_args, **_kwargs):
        """No-op fallback when Prometheus is unavailable."""

    def track_retained_modes(*_args, **_kwargs):
        """No-op fallback when Prometheus is unavailable."""

    def write_metrics_file(*_args, **_kwargs):
        """No-op fallback when Prometheus is unavailable."""

__all__ = [
    "track_stage",
    "track_bound_check",
    "track_reconstruction",
    "track_retained_modes",
    "write_metrics_file",
    "METRICS_AVAILABLE",
]
