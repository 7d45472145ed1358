"""Regularization filter models.

A ``FilterSpec`` fixes one member φ_α of a filter family; a ``ParamRule``
holds the inputs of the analytical α(δ) parameter choice.
"""

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

from src.exceptions import DomainError


class FilterKind(str, Enum):
    """Supported spectral filter families."""

    TIKHONOV = "tikhonov"
    LANDWEBER = "landweber"
    GLSM = "glsm"
    IDENTITY = "identity"  # no regularization, φ ≡ 1 on t > 0


@dataclass(frozen=True)
class FilterSpec:
    """One regularization filter φ_α.

    Attributes:
        kind: Filter family
        alpha: Regularization parameter, > 0 (ignored by IDENTITY)
        beta: Landweber step, > 0; may stay None until the operator norm is known
    """

    kind: FilterKind
    alpha: float = 1.0
    beta: Optional[float] = None

    def __post_init__(self) -> None:
        """Validate parameters."""
        if isinstance(self.kind, str) and not isinstance(self.kind, FilterKind):
            try:
                object.__setattr__(self, "kind", FilterKind(self.kind.lower()))
            except ValueError as exc:
                raise DomainError(f"Invalid filter kind: {self.kind}") from exc
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise DomainError(f"alpha must be positive and finite, got {self.alpha}")
        if self.beta is not None and not (self.beta > 0 and math.isfinite(self.beta)):
            raise DomainError(f"beta must be positive and finite, got {self.beta}")

    @classmethod
    def identity(cls) -> "FilterSpec":
        """The unregularized filter."""
        return cls(kind=FilterKind.IDENTITY)

    @property
    def iterations(self) -> int:
        """Landweber iteration count m = ceil(1/alpha)."""
        return max(1, math.ceil(1.0 / self.alpha))

    def with_beta(self, operator_norm: float) -> "FilterSpec":
        """Fill in the default Landweber step 1/(2‖A‖²) if none is set."""
        if self.kind is not FilterKind.LANDWEBER or self.beta is not None:
            return self
        if operator_norm <= 0:
            raise DomainError(f"operator norm must be positive, got {operator_norm}")
        return replace(self, beta=1.0 / (2.0 * operator_norm ** 2))

    def label(self) -> str:
        """Short human-readable description."""
        if self.kind is FilterKind.IDENTITY:
            return "identity"
        if self.kind is FilterKind.LANDWEBER:
            return f"landweber(alpha={self.alpha:g}, beta={self.beta:g}, m={self.iterations})" \
                if self.beta is not None else f"landweber(alpha={self.alpha:g})"
        return f"{self.kind.value}(alpha={self.alpha:g})"


@dataclass(frozen=True)
class ParamRule:
    """Inputs of the analytical regularization-parameter rule.

    Attributes:
        p: Exponent in (0, 1/4); α(δ) → 0 as δ → 0 only in this range
        operator_norm: ‖F♯^δ‖₂, needed by the Landweber rule
    """

    p: float = 0.125
    operator_norm: Optional[float] = None

    def __post_init__(self) -> None:
        """Validate the exponent and norm."""
        if not 0.0 < self.p < 0.25:
            raise DomainError(f"p must lie in (0, 1/4), got {self.p}")
        if self.operator_norm is not None and not self.operator_norm > 0:
            raise DomainError(f"operator_norm must be positive, got {self.operator_norm}")
