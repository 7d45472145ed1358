"""Sampling grids and indicator fields."""

import math
from dataclasses import dataclass, field
from typing import Any, Dict

import numpy as np

from src.exceptions import DimensionError, DomainError, InputValidationError


@dataclass(frozen=True)
class SamplingGrid:
    """Tensor lattice of sampling points including the endpoints.

    Field arrays on this grid have shape (ny, nx); row ``iy`` holds y = ys[iy]
    and rows run from y_min upward.
    """

    x_min: float = -1.0
    x_max: float = 1.0
    y_min: float = -1.0
    y_max: float = 1.0
    nx: int = 128
    ny: int = 128

    def __post_init__(self) -> None:
        """Validate bounds and resolution."""
        bounds = (self.x_min, self.x_max, self.y_min, self.y_max)
        if not all(math.isfinite(b) for b in bounds):
            raise DomainError("grid bounds must be finite")
        if not self.x_min < self.x_max or not self.y_min < self.y_max:
            raise DomainError("grid bounds must satisfy x_min < x_max and y_min < y_max")
        if self.nx < 2 or self.ny < 2:
            raise DomainError(f"grid needs at least 2x2 points, got {self.nx}x{self.ny}")

    @property
    def shape(self) -> tuple:
        """Array shape (ny, nx)."""
        return (self.ny, self.nx)

    @property
    def xs(self) -> np.ndarray:
        """x coordinates of the columns."""
        return np.linspace(self.x_min, self.x_max, self.nx)

    @property
    def ys(self) -> np.ndarray:
        """y coordinates of the rows."""
        return np.linspace(self.y_min, self.y_max, self.ny)

    def points(self) -> np.ndarray:
        """All points in row-major order (y outer, x inner), shape (ny·nx, 2)."""
        gx, gy = np.meshgrid(self.xs, self.ys)
        return np.column_stack((gx.ravel(), gy.ravel()))


@dataclass(frozen=True)
class IndicatorField:
    """Imaging functional W sampled on a grid.

    Attributes:
        grid: Sampling grid
        values: Nonnegative finite values, shape (ny, nx)
        metadata: Reproducibility record (filter, alpha, delta, seed, k, ...)
    """

    grid: SamplingGrid
    values: np.ndarray
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        """Validate shape and range of the values."""
        if self.values.shape != self.grid.shape:
            raise DimensionError(
                f"field shape {self.values.shape} does not match grid {self.grid.shape}"
            )
        if not np.all(np.isfinite(self.values)):
            raise InputValidationError("field values must be finite")
        if np.any(self.values < 0):
            raise InputValidationError("field values must be nonnegative")

    @property
    def max(self) -> float:
        """Largest value."""
        return float(self.values.max())
