"""Dense Hermitian spectral linear algebra.

Eigendecomposition, operator absolute value, the augmented far-field
operator F♯ = |Re F| + |Im F|, spectral projections, spectrum distances and
the stability index N(δ).

Conventions used everywhere in the package:

- inner product (u, v) = Σ u_i · conj(v_i), conjugate-linear in the second slot;
- eigenvalues are sorted non-increasing, ties keep the solver's order;
- spectral projections are exact orthogonal projections onto the eigenvectors
  whose eigenvalues lie strictly inside |λ − center| < rho_half.
"""

import logging
from typing import Sequence

import numpy as np
import scipy.linalg
from numpy.typing import ArrayLike

from src.exceptions import (
    ClusterError,
    DecompositionError,
    DomainError,
    EmptySpectrumError,
    InputValidationError,
)
from src.models.spectra import (
    ComplexMatrix,
    HermitianEigensystem,
    SingularSystem,
    as_complex_matrix,
)
from src.observability import track_retained_modes, track_stage

logger = logging.getLogger(__name__)

HERMITIAN_RTOL = 1e-10
CONTOUR_TOL = 1e-12
DEFAULT_CLAMP_REL = 1e-14


def inner(u: ArrayLike, v: ArrayLike) -> complex:
    """Return (u, v) = Σ u_i · conj(v_i)."""
    return complex(np.vdot(np.asarray(v), np.asarray(u)))


def operator_norm(matrix: ArrayLike) -> float:
    """Spectral norm ‖M‖₂ (largest singular value)."""
    arr = np.asarray(matrix, dtype=np.complex128)
    if arr.size == 0:
        return 0.0
    return float(scipy.linalg.svdvals(arr)[0])


def require_hermitian(m: ComplexMatrix) -> None:
    """Raise InputValidationError unless max |M − M*| ≤ 1e-10 · max |M|."""
    scale = float(np.max(np.abs(m)))
    skew = float(np.max(np.abs(m - m.conj().T)))
    if skew > HERMITIAN_RTOL * scale:
        raise InputValidationError(
            f"matrix is not Hermitian: max |M - M*| = {skew:.3e} exceeds "
            f"{HERMITIAN_RTOL:g} * max |M| = {HERMITIAN_RTOL * scale:.3e}"
        )


def hermitian_eigendecomposition(matrix: ArrayLike) -> HermitianEigensystem:
    """Eigendecomposition of a Hermitian matrix.

    The input is symmetrized as (M + M*)/2 before calling LAPACK so that
    round-off asymmetry never leaks into the eigenvectors.

    Args:
        matrix: Square Hermitian matrix (within relative tolerance 1e-10)

    Returns:
        HermitianEigensystem: Values non-increasing, orthonormal vectors

    Raises:
        DimensionError: If the matrix is not square
        InputValidationError: If the matrix is not Hermitian
        DecompositionError: If the eigensolver does not converge
    """
    m = as_complex_matrix(matrix)
    require_hermitian(m)
    sym = 0.5 * (m + m.conj().T)
    try:
        values, vectors = scipy.linalg.eigh(sym)
    except scipy.linalg.LinAlgError as e:
        raise DecompositionError(f"eigendecomposition did not converge: {e}") from e

    # eigh returns ascending order; a stable sort on -values keeps ties in place
    order = np.argsort(-values, kind="stable")
    return HermitianEigensystem(values=values[order], vectors=vectors[:, order])


def hermitian_abs(matrix: ArrayLike) -> ComplexMatrix:
    """Operator absolute value |M| = V·|Λ|·V* of a Hermitian matrix."""
    system = hermitian_eigendecomposition(matrix)
    result = (system.vectors * np.abs(system.values)) @ system.vectors.conj().T
    return 0.5 * (result + result.conj().T)


@track_stage("augment_sharp")
def augment_sharp(farfield: ArrayLike) -> ComplexMatrix:
    """Augmented operator F♯ = |Re F| + |Im F|.

    Re F = (F + F*)/2 and Im F = (F − F*)/(2i) are both Hermitian, so F♯ is
    a sum of two positive semidefinite matrices.

    Args:
        farfield: Square far-field matrix F

    Returns:
        ComplexMatrix: Hermitian positive semidefinite F♯
    """
    f = as_complex_matrix(farfield)
    real_part = 0.5 * (f + f.conj().T)
    imag_part = (f - f.conj().T) / 2j
    return hermitian_abs(real_part) + hermitian_abs(imag_part)


def singular_system(matrix: ArrayLike, clamp_rel: float = DEFAULT_CLAMP_REL) -> SingularSystem:
    """Positive spectrum of a Hermitian positive semidefinite matrix.

    Eigenpairs with λ ≤ clamp_rel · λ_max are discarded; this clamp is the
    only truncation applied anywhere downstream.

    Args:
        matrix: Hermitian PSD matrix (e.g. the output of ``augment_sharp``)
        clamp_rel: Relative clamp threshold in [0, 1)

    Returns:
        SingularSystem: Strictly positive, non-increasing values

    Raises:
        DomainError: If clamp_rel is outside [0, 1)
        EmptySpectrumError: If nothing survives the clamp
    """
    if not 0.0 <= clamp_rel < 1.0:
        raise DomainError(f"clamp_rel must lie in [0, 1), got {clamp_rel}")
    system = hermitian_eigendecomposition(matrix)
    lam_max = float(system.values[0])
    if lam_max <= 0.0:
        raise EmptySpectrumError(f"largest eigenvalue {lam_max:.3e} is not positive")

    threshold = clamp_rel * lam_max
    keep = system.values > max(threshold, 0.0)
    if not np.any(keep):
        raise EmptySpectrumError("all eigenvalues were clamped")

    logger.debug(
        "Singular system: kept %d of %d modes (threshold %.3e)",
        int(keep.sum()),
        system.values.shape[0],
        threshold,
    )
    track_retained_modes(int(keep.sum()))
    return SingularSystem(
        lambdas=system.values[keep],
        vectors=system.vectors[:, keep],
        clamp_threshold=threshold,
    )


def spectral_projection(
    system: HermitianEigensystem, cluster_center: float, rho_half: float
) -> ComplexMatrix:
    """Orthogonal projection onto the eigenvalues inside |λ − center| < rho_half.

    In finite dimension the Riesz contour integral over the circle of radius
    rho_half equals this projection exactly.

    Args:
        system: Eigensystem of the operator
        cluster_center: Center of the enclosing circle
        rho_half: Radius of the circle, > 0

    Returns:
        ComplexMatrix: Hermitian idempotent P with rank = cluster size

    Raises:
        DomainError: If rho_half is not positive
        ClusterError: If an eigenvalue lies on the circle
    """
    if rho_half <= 0:
        raise DomainError(f"rho_half must be positive, got {rho_half}")
    distance = np.abs(system.values - cluster_center)
    on_contour = np.abs(distance - rho_half) <= CONTOUR_TOL
    if np.any(on_contour):
        raise ClusterError(
            f"eigenvalue {system.values[on_contour][0]:.15g} lies on the contour "
            f"|λ - {cluster_center:.15g}| = {rho_half:.15g}"
        )
    basis = system.vectors[:, distance < rho_half]
    return basis @ basis.conj().T


def spectrum_distance(a: Sequence[float], b: Sequence[float]) -> float:
    """Hausdorff distance between two finite spectra.

    The shorter list is padded with zeros, the accumulation point of a
    compact operator's spectrum.

    Raises:
        InputValidationError: If either list is empty or not sorted non-increasing
    """
    first = np.asarray(a, dtype=np.float64).reshape(-1)
    second = np.asarray(b, dtype=np.float64).reshape(-1)
    if first.size == 0 or second.size == 0:
        raise InputValidationError("spectrum_distance needs two non-empty spectra")
    for name, values in (("a", first), ("b", second)):
        if np.any(np.diff(values) > 0):
            raise InputValidationError(f"spectrum {name} must be sorted non-increasing")

    size = max(first.size, second.size)
    first = np.pad(first, (0, size - first.size))
    second = np.pad(second, (0, size - second.size))
    gaps = np.abs(first[:, None] - second[None, :])
    return float(max(gaps.min(axis=1).max(), gaps.min(axis=0).max()))


def isolation_gaps(lambdas: Sequence[float]) -> np.ndarray:
    """Distance from every eigenvalue to the rest of the (distinct) spectrum.

    Returns ``inf`` for an eigenvalue with no distinct neighbour.
    """
    values = np.asarray(lambdas, dtype=np.float64).reshape(-1)
    diffs = np.abs(values[:, None] - values[None, :])
    diffs[diffs == 0.0] = np.inf
    return diffs.min(axis=1) if values.size else values


def compute_n_delta(lambdas: Sequence[float], delta: float) -> int:
    """Stability index N(δ).

    N(δ) = sup{n : dist(λ_n, spec \\ {λ_n}) ≥ 2√δ and 8n·δ^(1/4) ≤ 1}, with
    N(δ) = 0 when no index qualifies.

    Args:
        lambdas: Positive eigenvalues, non-increasing
        delta: Noise level in (0, 1/4)

    Returns:
        int: Largest qualifying 1-based index, or 0

    Raises:
        DomainError: If delta is outside (0, 1/4)
        InputValidationError: If lambdas are not positive and sorted
    """
    if not 0.0 < delta < 0.25:
        raise DomainError(f"delta must lie in (0, 1/4), got {delta}")
    values = np.asarray(lambdas, dtype=np.float64).reshape(-1)
    if np.any(values <= 0):
        raise InputValidationError("compute_n_delta needs strictly positive eigenvalues")
    if np.any(np.diff(values) > 0):
        raise InputValidationError("eigenvalues must be sorted non-increasing")

    index = np.arange(1, values.size + 1)
    isolated = isolation_gaps(values) >= 2.0 * np.sqrt(delta)
    small_enough = 8.0 * index * delta ** 0.25 <= 1.0
    qualifying = index[isolated & small_enough]
    n_delta = int(qualifying.max()) if qualifying.size else 0
    logger.debug("N(delta=%.3e) = %d over %d eigenvalues", delta, n_delta, values.size)
    return n_delta
