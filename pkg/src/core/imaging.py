"""Imaging functional over a sampling grid and reconstruction scoring.

W(z) = [Σ φ_α(λ_j)²/λ_j · |(x_j, ℓ_z)|²]^(−1) is evaluated for all grid
points at once: with L = [ℓ_z] (N × P) and C = V* L, the sums are
(φ²/λ) · |C|².
"""

import logging
from dataclasses import replace
from typing import Dict, Optional, Sequence

import numpy as np
from numpy.typing import ArrayLike

from src.core.indicator import indicator_weights, resolve_filter
from src.core.scattering import rhs_matrix
from src.core.spectra import DEFAULT_CLAMP_REL, augment_sharp, singular_system
from src.exceptions import DimensionError, DomainError, InputValidationError
from src.models.imaging import IndicatorField, SamplingGrid
from src.models.regularization import FilterSpec
from src.models.scattering import ScattererGeometry, WaveConfig
from src.models.spectra import as_complex_matrix
from src.observability import track_reconstruction, track_stage

logger = logging.getLogger(__name__)

W_CAP = 1e300
DEFAULT_LEVELS = tuple(round(0.1 * i, 1) for i in range(1, 10))


@track_stage("reconstruct")
def reconstruct(
    farfield: ArrayLike,
    spec: FilterSpec,
    wave: WaveConfig,
    grid: SamplingGrid,
    clamp_rel: float = DEFAULT_CLAMP_REL,
    metadata: Optional[Dict] = None,
) -> IndicatorField:
    """Evaluate W(z) on every grid point from a (noisy) far-field matrix.

    Points whose indicator sum vanishes get W = 1e300.

    Args:
        farfield: Square far-field matrix of size ``wave.num_directions``
        spec: Regularization filter; Landweber without beta uses 1/(2‖F♯‖₂²)
        wave: Wavenumber and directions of the data
        grid: Sampling grid
        clamp_rel: Relative eigenvalue clamp of F♯
        metadata: Extra entries (delta, seed, ...) recorded on the field

    Raises:
        DimensionError: If F is not square or does not match the directions
        EmptySpectrumError: If every eigenvalue of F♯ is clamped
    """
    f = as_complex_matrix(farfield)
    if f.shape[0] != wave.num_directions:
        raise DimensionError(
            f"far-field matrix has size {f.shape[0]}, expected {wave.num_directions}"
        )
    system = singular_system(augment_sharp(f), clamp_rel)
    spec = resolve_filter(system, spec)
    logger.info(
        "Reconstructing on %dx%d grid with %s (%d modes)",
        grid.nx,
        grid.ny,
        spec.label(),
        system.rank,
    )

    coeffs = system.vectors.conj().T @ rhs_matrix(grid.points(), wave)
    sums = indicator_weights(system, spec) @ (np.abs(coeffs) ** 2)
    capped = sums <= 1.0 / W_CAP
    if np.any(capped):
        logger.warning("Indicator sum vanished at %d grid points; W capped", int(capped.sum()))
    values = np.full(sums.shape, W_CAP)
    np.divide(1.0, sums, out=values, where=~capped)

    record = {
        "filter": spec.kind.value,
        "alpha": spec.alpha,
        "beta": spec.beta,
        "k": wave.k,
        "modes": system.rank,
    }
    record.update(metadata or {})
    track_reconstruction(spec.kind.value)
    return IndicatorField(grid=grid, values=values.reshape(grid.shape), metadata=record)


def normalize_field(field: IndicatorField) -> IndicatorField:
    """Divide by the maximum so the largest value is 1.

    Raises:
        InputValidationError: For an all-zero field
    """
    peak = field.max
    if peak <= 0:
        raise InputValidationError("cannot normalize an all-zero field")
    return replace(
        field, values=field.values / peak, metadata={**field.metadata, "normalized": True}
    )


def threshold_mask(field: IndicatorField, level: float) -> np.ndarray:
    """Mask of grid points with value ≥ level."""
    if not 0.0 <= level <= 1.0:
        raise DomainError(f"level must lie in [0, 1], got {level}")
    return field.values >= level


def inside_mask(geometry: ScattererGeometry, grid: SamplingGrid) -> np.ndarray:
    """Grid points with |z| < r(atan2(z_y, z_x)), shape (ny, nx)."""
    return geometry.contains(grid.points()).reshape(grid.shape)


def jaccard(mask: ArrayLike, geometry: ScattererGeometry, grid: SamplingGrid) -> float:
    """Intersection over union of ``mask`` and the true scatterer.

    Two empty sets score 1.
    """
    region = np.asarray(mask, dtype=bool)
    if region.shape != grid.shape:
        raise DimensionError(f"mask shape {region.shape} does not match grid {grid.shape}")
    truth = inside_mask(geometry, grid)
    union = int(np.count_nonzero(region | truth))
    if union == 0:
        return 1.0
    return int(np.count_nonzero(region & truth)) / union


def threshold_sweep(
    field: IndicatorField,
    geometry: ScattererGeometry,
    levels: Sequence[float] = DEFAULT_LEVELS,
) -> Dict[float, float]:
    """Jaccard score of the normalized field at each threshold level."""
    normalized = normalize_field(field)
    return {
        float(level): jaccard(threshold_mask(normalized, level), geometry, field.grid)
        for level in levels
    }
