"""Picard series, regularized solutions and the quadratic indicator.

For a singular system (λ_n, x_n) of a positive operator A and a right-hand
side ℓ, with c_n = conj(⟨x_n, ℓ⟩) = x_n* ℓ:

- Picard partial sums     Σ_{j≤n} |c_j|² / λ_j
- regularized solution    x^α = Σ φ_α(λ_n)/λ_n · c_n · x_n
- quadratic indicator     ⟨x^α, A x^α⟩ = Σ φ_α(λ_n)²/λ_n · |c_n|²

Only retained (clamped) modes take part in any sum.
"""

import logging
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike

from src.core.regularization import filter_value
from src.core.spectra import inner
from src.exceptions import DomainError
from src.models.indicator import PicardReport
from src.models.regularization import FilterSpec
from src.models.spectra import (
    ComplexVector,
    RealVector,
    SingularSystem,
    as_complex_matrix,
    as_complex_vector,
)

logger = logging.getLogger(__name__)


def resolve_filter(system: SingularSystem, spec: FilterSpec) -> FilterSpec:
    """Fill in the default Landweber step from ‖A‖₂ = λ₁."""
    return spec.with_beta(float(system.lambdas[0]))


def indicator_weights(system: SingularSystem, spec: FilterSpec) -> RealVector:
    """Per-mode weights φ_α(λ_n)² / λ_n."""
    phi = filter_value(resolve_filter(system, spec), system.lambdas)
    return np.asarray(phi) ** 2 / system.lambdas


def picard_sum(
    system: SingularSystem, ell: ArrayLike, truncation: Optional[int] = None
) -> PicardReport:
    """Partial sums of the Picard series Σ |⟨x_n, ℓ⟩|² / λ_n.

    Args:
        system: Singular system of the operator
        ell: Right-hand side, length ``system.dim``
        truncation: Number of modes to sum, defaults to all retained modes

    Returns:
        PicardReport: Non-decreasing partial sums

    Raises:
        DimensionError: If ell has the wrong length
        DomainError: If truncation exceeds the number of retained modes
    """
    truncation = system.rank if truncation is None else truncation
    if not 0 <= truncation <= system.rank:
        raise DomainError(f"truncation must lie in [0, {system.rank}], got {truncation}")
    coeffs = system.coefficients(ell)[:truncation]
    terms = np.abs(coeffs) ** 2 / system.lambdas[:truncation]
    return PicardReport(partial_sums=np.cumsum(terms), truncation=truncation)


def regularized_solution_coeffs(
    system: SingularSystem, ell: ArrayLike, spec: FilterSpec
) -> ComplexVector:
    """Coefficients φ_α(λ_n)/λ_n · conj(⟨x_n, ℓ⟩) of x^α in the basis x_n.

    A Landweber spec without beta uses 1/(2λ₁²).
    """
    phi = filter_value(resolve_filter(system, spec), system.lambdas)
    return (np.asarray(phi) / system.lambdas) * system.coefficients(ell)


def regularized_solution(system: SingularSystem, ell: ArrayLike, spec: FilterSpec) -> ComplexVector:
    """Assemble x^α = Σ c_n x_n."""
    return system.vectors @ regularized_solution_coeffs(system, ell, spec)


def quadratic_indicator(system: SingularSystem, ell: ArrayLike, spec: FilterSpec) -> float:
    """⟨x^α, A x^α⟩ = Σ φ_α(λ_n)²/λ_n · |⟨x_n, ℓ⟩|².

    With the identity filter this equals the full Picard sum.
    """
    coeffs = system.coefficients(ell)
    return float(np.dot(indicator_weights(system, spec), np.abs(coeffs) ** 2))


def glsm_functional(matrix: ArrayLike, x: ArrayLike, ell: ArrayLike, alpha: float) -> float:
    """J_α(x; ℓ) = α⟨x, Ax⟩ + ‖Ax − ℓ‖².

    Raises:
        DimensionError: If the shapes disagree
        DomainError: If alpha is not positive
    """
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    a = as_complex_matrix(matrix)
    dim = a.shape[0]
    xv = as_complex_vector(x, dim)
    lv = as_complex_vector(ell, dim)
    ax = a @ xv
    residual = ax - lv
    # ⟨x, Ax⟩ is real for Hermitian A; drop the round-off imaginary part
    return float(alpha * inner(xv, ax).real + np.vdot(residual, residual).real)
