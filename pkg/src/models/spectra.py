"""Spectral data structures for dense Hermitian operators.

``ComplexMatrix`` is a plain two-dimensional ``numpy`` array of dtype
``complex128``; the helpers here validate that shape and finiteness
contract once at the boundary so the engines can assume it.
"""

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from src.exceptions import DimensionError, InputValidationError

ComplexMatrix = NDArray[np.complex128]
ComplexVector = NDArray[np.complex128]
RealVector = NDArray[np.float64]


def as_complex_matrix(matrix: ArrayLike, square: bool = True) -> ComplexMatrix:
    """Coerce input to a finite complex128 matrix.

    Args:
        matrix: Anything ``numpy`` can turn into a 2-D array
        square: Require rows == cols

    Returns:
        ComplexMatrix: A complex128 array (a copy only when conversion is needed)

    Raises:
        DimensionError: If the input is not 2-D or not square when required
        InputValidationError: If any entry is NaN or infinite
    """
    arr = np.asarray(matrix, dtype=np.complex128)
    if arr.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {arr.shape}")
    if square and arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {arr.shape}")
    if arr.size == 0:
        raise DimensionError("matrix has no entries")
    if not np.all(np.isfinite(arr)):
        raise InputValidationError("matrix entries must be finite")
    return arr


def as_complex_vector(vector: ArrayLike, length: int) -> ComplexVector:
    """Coerce input to a finite complex vector of the given length."""
    arr = np.asarray(vector, dtype=np.complex128).reshape(-1)
    if arr.shape[0] != length:
        raise DimensionError(f"expected vector of length {length}, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise InputValidationError("vector entries must be finite")
    return arr


@dataclass(frozen=True)
class HermitianEigensystem:
    """Eigenpairs of a Hermitian matrix.

    Attributes:
        values: Real eigenvalues sorted non-increasing
        vectors: Orthonormal eigenvectors, column ``i`` belongs to ``values[i]``
    """

    values: RealVector
    vectors: ComplexMatrix

    def __post_init__(self) -> None:
        """Validate alignment and ordering."""
        if self.vectors.ndim != 2 or self.vectors.shape[1] != self.values.shape[0]:
            raise DimensionError(
                f"{self.values.shape[0]} eigenvalues do not match vectors of shape "
                f"{self.vectors.shape}"
            )
        if np.any(np.diff(self.values) > 0):
            raise InputValidationError("eigenvalues must be sorted non-increasing")

    @property
    def dim(self) -> int:
        """Ambient dimension of the eigenvectors."""
        return int(self.vectors.shape[0])

    def reconstruct(self) -> ComplexMatrix:
        """Return V·diag(values)·V*."""
        return (self.vectors * self.values) @ self.vectors.conj().T


@dataclass(frozen=True)
class SingularSystem:
    """Positive part of the spectrum of a positive Hermitian operator.

    In the finite-dimensional identity-Riesz setting the dual basis
    coincides with ``vectors``, so this is the full singular system.

    Attributes:
        lambdas: Strictly positive eigenvalues, non-increasing
        vectors: Orthonormal eigenvectors aligned with ``lambdas``
        clamp_threshold: Absolute threshold below which eigenpairs were dropped
    """

    lambdas: RealVector
    vectors: ComplexMatrix
    clamp_threshold: float

    def __post_init__(self) -> None:
        """Validate positivity and ordering."""
        if self.lambdas.shape[0] == 0:
            raise InputValidationError("a singular system needs at least one value")
        if self.vectors.ndim != 2 or self.vectors.shape[1] != self.lambdas.shape[0]:
            raise DimensionError(
                f"{self.lambdas.shape[0]} values do not match vectors of shape "
                f"{self.vectors.shape}"
            )
        if np.any(self.lambdas <= 0):
            raise InputValidationError("singular values must be strictly positive")
        if np.any(np.diff(self.lambdas) > 0):
            raise InputValidationError("singular values must be sorted non-increasing")

    @property
    def dim(self) -> int:
        """Ambient dimension of the vectors."""
        return int(self.vectors.shape[0])

    @property
    def rank(self) -> int:
        """Number of retained modes."""
        return int(self.lambdas.shape[0])

    def coefficients(self, ell: ArrayLike) -> ComplexVector:
        """Return conj(<x_n, ell>) = x_n* ell for every retained mode."""
        vec = as_complex_vector(ell, self.dim)
        return self.vectors.conj().T @ vec
