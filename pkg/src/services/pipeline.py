"""Orchestration of the command-line stages.

Each function takes a validated ``RunConfig`` plus the stage input and
returns plain results; the CLI decides where they are written.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

from src.core.imaging import (
    jaccard,
    normalize_field,
    reconstruct,
    threshold_mask,
    threshold_sweep,
)
from src.core.indicator import picard_sum
from src.core.perturb_verify import run_sweep
from src.core.regularization import landweber_iterations, select_alpha
from src.core.scattering import add_noise, assemble_farfield, rhs_vector
from src.core.spectra import augment_sharp, operator_norm, singular_system
from src.models.imaging import IndicatorField
from src.models.indicator import PicardReport
from src.models.regularization import FilterKind, FilterSpec
from src.models.run_config import RunConfig
from src.models.spectra import ComplexMatrix, as_complex_matrix
from src.models.verification import BoundReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ParameterChoice:
    """Result of the analytical parameter rule."""

    kind: FilterKind
    alpha: float
    delta: float
    p: float
    operator_norm: float
    beta: Optional[float] = None
    iterations: Optional[int] = None

    def summary(self) -> str:
        """One-line ``key=value`` description."""
        parts = [
            f"kind={self.kind.value}",
            f"alpha={self.alpha:.17g}",
            f"delta={self.delta:.17g}",
            f"p={self.p:.17g}",
            f"norm={self.operator_norm:.17g}",
        ]
        if self.beta is not None:
            parts.append(f"beta={self.beta:.17g}")
        if self.iterations is not None:
            parts.append(f"iterations={self.iterations}")
        return " ".join(parts)


@dataclass(frozen=True)
class Reconstruction:
    """Imaging functional and its quality scores."""

    field: IndicatorField
    normalized: IndicatorField
    jaccard: float
    sweep: Dict[float, float]


def synthesize(config: RunConfig) -> ComplexMatrix:
    """Noise-free Born far-field matrix of the configured scatterer."""
    return assemble_farfield(
        config.geometry.build(),
        config.medium.build(),
        config.wave.build(),
        config.quad.build(),
    )


def perturb(matrix: ComplexMatrix, config: RunConfig) -> ComplexMatrix:
    """Apply the configured multiplicative noise."""
    return add_noise(matrix, config.noise.delta, config.noise.seed, config.noise.norm)


def sharp_norm(matrix: ComplexMatrix) -> float:
    """‖F♯‖₂ of a far-field matrix."""
    return operator_norm(augment_sharp(matrix))


def select_parameter(matrix: ComplexMatrix, config: RunConfig) -> ParameterChoice:
    """α(δ) for the configured filter, noise level and exponent.

    The Landweber rule and step use ‖F♯^δ‖₂ of ``matrix``.
    """
    kind = config.filter.kind
    norm = sharp_norm(as_complex_matrix(matrix))
    alpha = select_alpha(kind, config.noise.delta, config.filter.rule(norm))
    beta = None
    iterations = None
    if kind is FilterKind.LANDWEBER:
        beta = config.filter.beta if config.filter.beta is not None else 1.0 / (2.0 * norm ** 2)
        iterations = landweber_iterations(alpha)
    return ParameterChoice(
        kind=kind,
        alpha=alpha,
        delta=config.noise.delta,
        p=config.filter.p,
        operator_norm=norm,
        beta=beta,
        iterations=iterations,
    )


def filter_for(matrix: ComplexMatrix, config: RunConfig) -> FilterSpec:
    """Filter of the run, with α from the parameter rule when ``filter.auto`` is set."""
    spec = config.filter.build()
    if config.filter.auto:
        choice = select_parameter(matrix, config)
        spec = FilterSpec(kind=spec.kind, alpha=choice.alpha, beta=choice.beta)
    return spec


def reconstruct_field(
    matrix: ComplexMatrix, config: RunConfig, spec: Optional[FilterSpec] = None
) -> Reconstruction:
    """Imaging functional on the configured grid, scored against the configured geometry."""
    spec = spec or filter_for(matrix, config)
    field_raw = reconstruct(
        matrix,
        spec,
        config.wave.build(),
        config.grid.build(),
        config.spectra.clamp_rel,
        metadata={"delta": config.noise.delta, "seed": config.noise.seed},
    )
    normalized = normalize_field(field_raw)
    geometry = config.geometry.build()
    score = jaccard(threshold_mask(normalized, config.output.threshold), geometry, normalized.grid)
    sweep = threshold_sweep(field_raw, geometry)
    logger.info("Jaccard at threshold %.2f: %.4f", config.output.threshold, score)
    logger.info(
        "Threshold sweep: %s", ", ".join(f"{lvl:.1f}={val:.3f}" for lvl, val in sweep.items())
    )
    return Reconstruction(field=field_raw, normalized=normalized, jaccard=score, sweep=sweep)


def verify(config: RunConfig) -> List[BoundReport]:
    """Run the perturbation-bound sweep of the configuration."""
    section = config.verify
    return run_sweep(section.dims, section.deltas, section.trials, section.decay, section.seed)


def picard_table(
    matrix: ComplexMatrix, config: RunConfig, point: Sequence[float]
) -> PicardReport:
    """Picard partial sums of ℓ_z against the singular system of F♯."""
    system = singular_system(augment_sharp(as_complex_matrix(matrix)), config.spectra.clamp_rel)
    wave = config.wave.build()
    ell = rhs_vector(np.asarray(point, dtype=np.float64), wave.k, wave)
    report = picard_sum(system, ell)
    logger.info(
        "Picard sum at z=(%g, %g): total %.6e over %d modes",
        point[0],
        point[1],
        report.total,
        report.truncation,
    )
    return report
