"""Picard series report."""

from dataclasses import dataclass

import numpy as np

from src.exceptions import DomainError, InputValidationError
from src.models.spectra import RealVector


@dataclass(frozen=True)
class PicardReport:
    """Partial sums Σ_{j≤n} |⟨x_j, ℓ⟩|²/λ_j for n = 1..truncation.

    Attributes:
        partial_sums: ``partial_sums[n - 1]`` is the sum over the first n modes
        truncation: Number of modes summed
    """

    partial_sums: RealVector
    truncation: int

    def __post_init__(self) -> None:
        """Validate length and monotonicity."""
        if self.partial_sums.shape[0] != self.truncation:
            raise InputValidationError(
                f"{self.partial_sums.shape[0]} partial sums for truncation {self.truncation}"
            )
        # summands are nonnegative; allow round-off in the last place
        if np.any(np.diff(self.partial_sums) < -1e-12 * np.abs(self.partial_sums[1:])):
            raise InputValidationError("partial sums must be non-decreasing")

    @property
    def total(self) -> float:
        """Final partial sum (0 for an empty truncation)."""
        return float(self.partial_sums[-1]) if self.truncation else 0.0

    def partial(self, n: int) -> float:
        """Sum over the first n modes."""
        if not 0 <= n <= self.truncation:
            raise DomainError(f"n must lie in [0, {self.truncation}], got {n}")
        return float(self.partial_sums[n - 1]) if n else 0.0

    def growth_ratio(self, high: int, low: int) -> float:
        """Ratio partial(high) / partial(low); ``inf`` when the lower sum vanishes."""
        denominator = self.partial(low)
        numerator = self.partial(high)
        if denominator == 0.0:
            return float("inf") if numerator > 0 else 1.0
        return numerator / denominator
