"""Regularization filters and the analytical parameter rule.

Filters (all bounded by C_reg = 1):

- Tikhonov   φ_α(t) = t² / (t² + α)
- Landweber  φ_α(t) = 1 − (1 − βt²)^m,  m = ⌈1/α⌉, βt² ≤ 1
- GLSM       φ_α(t) = t / (α + t)
- Identity   φ(t) = 1 for t > 0, φ(0) = 0

Parameter rule for noise level δ and exponent p ∈ (0, 1/4), obtained by
solving C_α² δ^(1/4) = δ^p:

- α_Tik  = δ^(1/4 − p) / 4
- α_Land = δ^(1/4 − p) / (2‖F♯^δ‖₂²)
- α_GLSM = δ^((1/4 − p)/2)
"""

import logging
import math
from typing import Tuple, Union

import numpy as np
from numpy.typing import ArrayLike

from src.exceptions import DomainError, FilterBoundError
from src.models.regularization import FilterKind, FilterSpec, ParamRule

logger = logging.getLogger(__name__)

C_REG = 1.0


def landweber_iterations(alpha: float) -> int:
    """Landweber iteration count m = ⌈1/α⌉ (at least 1)."""
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    return max(1, math.ceil(1.0 / alpha))


def default_landweber_beta(operator_norm: float) -> float:
    """Landweber step 1/(2‖A‖₂²)."""
    if not operator_norm > 0:
        raise DomainError(f"operator norm must be positive, got {operator_norm}")
    return 1.0 / (2.0 * operator_norm ** 2)


def _require_beta(spec: FilterSpec) -> float:
    if spec.beta is None:
        raise DomainError("Landweber filter needs beta; call FilterSpec.with_beta(norm) first")
    return spec.beta


def filter_value(spec: FilterSpec, t: Union[float, ArrayLike]) -> Union[float, np.ndarray]:
    """Evaluate φ_α(t).

    Accepts a scalar or an array of nonnegative arguments and returns the
    same shape.

    Raises:
        DomainError: For negative t, or Landweber with βt² > 1
    """
    arr = np.asarray(t, dtype=np.float64)
    if np.any(arr < 0):
        raise DomainError("filter argument t must be nonnegative")

    if spec.kind is FilterKind.TIKHONOV:
        sq = arr * arr
        out = sq / (sq + spec.alpha)
    elif spec.kind is FilterKind.GLSM:
        out = arr / (spec.alpha + arr)
    elif spec.kind is FilterKind.LANDWEBER:
        beta = _require_beta(spec)
        x = beta * arr * arr
        if np.any(x > 1.0):
            raise DomainError(
                f"Landweber filter needs beta*t^2 <= 1, got max {float(np.max(x)):.6g}"
            )
        with np.errstate(divide="ignore"):
            # 1 - (1 - x)^m computed without cancellation for small x
            out = -np.expm1(spec.iterations * np.log1p(-x))
    else:
        out = (arr > 0).astype(np.float64)

    return float(out) if out.ndim == 0 else out


def filter_constants(spec: FilterSpec) -> Tuple[float, float]:
    """Constants (C_reg, C_α) with φ_α ≤ C_reg and φ_α(t) ≤ C_α·t.

    Landweber uses the effective parameter 1/m, C_α = √(βm), which equals
    √(β/α) when α = 1/m.

    Raises:
        FilterBoundError: For the identity filter, which has no C_α
    """
    if spec.kind is FilterKind.TIKHONOV:
        return C_REG, 1.0 / (2.0 * math.sqrt(spec.alpha))
    if spec.kind is FilterKind.LANDWEBER:
        return C_REG, math.sqrt(_require_beta(spec) * spec.iterations)
    if spec.kind is FilterKind.GLSM:
        return C_REG, 1.0 / spec.alpha
    raise FilterBoundError("identity filter has no bound phi(t) <= C_alpha * t")


def filter_lipschitz(spec: FilterSpec, t_max: float) -> float:
    """Lipschitz constant of φ_α on [0, t_max].

    Raises:
        FilterBoundError: For the identity filter (discontinuous at 0)
    """
    if t_max < 0:
        raise DomainError(f"t_max must be nonnegative, got {t_max}")
    if spec.kind is FilterKind.TIKHONOV:
        # max of 2αt/(t²+α)² is reached at t = √(α/3)
        return 3.0 * math.sqrt(3.0) / (8.0 * math.sqrt(spec.alpha))
    if spec.kind is FilterKind.GLSM:
        return 1.0 / spec.alpha
    if spec.kind is FilterKind.LANDWEBER:
        return 2.0 * spec.iterations * _require_beta(spec) * t_max
    raise FilterBoundError("identity filter is not continuous at t = 0")


def select_alpha(kind: Union[FilterKind, str], delta: float, rule: ParamRule) -> float:
    """Regularization parameter α(δ) from C_α² δ^(1/4) = δ^p.

    Args:
        kind: Tikhonov, Landweber or GLSM
        delta: Noise level in (0, 1)
        rule: Exponent p and, for Landweber, ‖F♯^δ‖₂

    Returns:
        float: Positive α, tending to 0 with δ

    Raises:
        DomainError: For δ outside (0, 1), a missing Landweber norm or the identity filter
    """
    kind = FilterKind(kind)
    if not 0.0 < delta < 1.0:
        raise DomainError(f"delta must lie in (0, 1) for the parameter rule, got {delta}")
    exponent = 0.25 - rule.p

    if kind is FilterKind.TIKHONOV:
        alpha = 0.25 * delta ** exponent
    elif kind is FilterKind.GLSM:
        alpha = delta ** (0.5 * exponent)
    elif kind is FilterKind.LANDWEBER:
        if rule.operator_norm is None:
            raise DomainError("Landweber rule needs the operator norm of F#^delta")
        alpha = delta ** exponent / (2.0 * rule.operator_norm ** 2)
    else:
        raise DomainError("identity filter has no regularization parameter")

    logger.info("Selected alpha=%.6g for %s (delta=%g, p=%g)", alpha, kind.value, delta, rule.p)
    return alpha
