"""Prometheus metrics instrumentation for the reconstruction pipeline.

Metrics live in a dedicated registry so that a single CLI invocation can
dump them with ``write_metrics_file`` (Prometheus textfile format) instead
of serving them over HTTP.

Usage:
    from src.observability.metrics import track_stage, track_bound_check

    @track_stage('assemble_farfield')
    def assemble(...):
        ...
"""

import logging
import time
from functools import wraps
from pathlib import Path
from typing import Any, Callable, Union

from prometheus_client import CollectorRegistry, Counter, Gauge, Histogram, write_to_textfile

logger = logging.getLogger(__name__)

REGISTRY = CollectorRegistry(auto_describe=True)


# =============================================================================
# Pipeline Metrics
# =============================================================================

stage_duration_seconds = Histogram(
    'regfm_stage_duration_seconds',
    'Duration of a pipeline stage in seconds',
    ['stage'],
    buckets=(0.001, 0.01, 0.05, 0.1, 0.5, 1.0, 5.0, 30.0, float('inf')),
    registry=REGISTRY,
)

stage_errors_total = Counter(
    'regfm_stage_errors_total',
    'Number of pipeline stages that raised',
    ['stage'],
    registry=REGISTRY,
)

reconstructions_total = Counter(
    'regfm_reconstructions_total',
    'Number of imaging functionals evaluated',
    ['filter'],
    registry=REGISTRY,
)

retained_modes = Gauge(
    'regfm_retained_modes',
    'Number of spectral modes kept after clamping in the last decomposition',
    registry=REGISTRY,
)


# =============================================================================
# Verification Metrics
# =============================================================================

bound_checks_total = Counter(
    'regfm_bound_checks_total',
    'Perturbation bound checks by outcome',
    ['bound', 'result'],  # result: satisfied, violated, skipped
    registry=REGISTRY,
)


# =============================================================================
# Decorators and Helpers
# =============================================================================

def track_stage(stage: str) -> Callable:
    """Decorator recording the latency of a pipeline stage.

    Args:
        stage: Stage label (e.g. 'augment_sharp', 'reconstruct')
    """
    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            start = time.perf_counter()
            try:
                return func(*args, **kwargs)
            except Exception:
                stage_errors_total.labels(stage=stage).inc()
                raise
            finally:
                elapsed = time.perf_counter() - start
                stage_duration_seconds.labels(stage=stage).observe(elapsed)
                logger.debug(
                    "Stage %s finished in %.1f ms",
                    stage,
                    1e3 * elapsed,
                    extra={"stage": stage, "duration_ms": round(1e3 * elapsed, 3)},
                )
        return wrapper
    return decorator


def track_bound_check(bound: str, result: str) -> None:
    """Count one bound-check outcome.

    Args:
        bound: Bound label (e.g. 'weyl', 'projection')
        result: 'satisfied', 'violated' or 'skipped'
    """
    bound_checks_total.labels(bound=bound, result=result).inc()


def track_reconstruction(filter_kind: str) -> None:
    """Count one imaging-functional evaluation."""
    reconstructions_total.labels(filter=filter_kind).inc()


def track_retained_modes(modes: int) -> None:
    """Record the number of modes kept by the last spectral clamp."""
    retained_modes.set(modes)


def write_metrics_file(path: Union[str, Path]) -> None:
    """Write the registry in Prometheus text format.

    Args:
        path: Destination file (written atomically by prometheus_client)
    """
    write_to_textfile(str(path), REGISTRY)
    logger.info("Metrics written to %s", path)
