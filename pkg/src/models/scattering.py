"""Scatterer, medium, incident-wave and quadrature parameters.

Geometries are star-shaped with a trigonometric-polynomial radius

    r(θ) = c₀ + Σ_k (a_k cos kθ + b_k sin kθ)

so periodicity is structural and r′ is exact.
"""

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike

from src.exceptions import DomainError

POSITIVITY_SAMPLES = 4096


class NoiseNorm(str, Enum):
    """Normalization of the multiplicative noise matrix E."""

    SPECTRAL = "spectral"
    FROBENIUS = "frobenius"


@dataclass(frozen=True)
class ScattererGeometry:
    """Star-shaped scatterer D = {ρ(cos θ, sin θ) : 0 ≤ ρ < r(θ)}.

    Attributes:
        c0: Mean radius
        cos_coeffs: a_1, a_2, ... multiplying cos kθ
        sin_coeffs: b_1, b_2, ... multiplying sin kθ
        name: Label used in logs and output metadata
    """

    c0: float
    cos_coeffs: Tuple[float, ...] = ()
    sin_coeffs: Tuple[float, ...] = ()
    name: str = field(default="custom", compare=False)

    def __post_init__(self) -> None:
        """Validate coefficients and positivity of r."""
        object.__setattr__(self, "cos_coeffs", tuple(float(c) for c in self.cos_coeffs))
        object.__setattr__(self, "sin_coeffs", tuple(float(c) for c in self.sin_coeffs))
        coeffs = (self.c0, *self.cos_coeffs, *self.sin_coeffs)
        if not all(math.isfinite(c) for c in coeffs):
            raise DomainError("geometry coefficients must be finite")
        theta = 2.0 * np.pi * np.arange(POSITIVITY_SAMPLES) / POSITIVITY_SAMPLES
        r_min = float(np.min(self.radius(theta)))
        if r_min <= 0.0:
            raise DomainError(f"radius must be positive everywhere, minimum is {r_min:.6g}")

    @classmethod
    def star(cls) -> "ScattererGeometry":
        """r(θ) = 0.5(1 − 0.3 sin 4θ)."""
        return cls(c0=0.5, cos_coeffs=(0.0,) * 4, sin_coeffs=(0.0, 0.0, 0.0, -0.15), name="star")

    @classmethod
    def disk(cls, radius: float = 0.5) -> "ScattererGeometry":
        """Disk of the given radius centred at the origin."""
        return cls(c0=radius, name="disk")

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[float]) -> "ScattererGeometry":
        """Build from a flat list ``c0, a1, b1, a2, b2, ...``.

        Raises:
            DomainError: If the list is empty or has a dangling a_k
        """
        values = [float(c) for c in coeffs]
        if not values or len(values) % 2 == 0:
            raise DomainError("coefficient list must be c0 followed by (a_k, b_k) pairs")
        return cls(c0=values[0], cos_coeffs=tuple(values[1::2]), sin_coeffs=tuple(values[2::2]))

    @property
    def is_disk(self) -> bool:
        """True when r is constant."""
        return not any(self.cos_coeffs) and not any(self.sin_coeffs)

    def to_coeffs(self) -> Tuple[float, ...]:
        """Flat ``c0, a1, b1, ...`` list (inverse of ``from_coeffs``)."""
        order = max(len(self.cos_coeffs), len(self.sin_coeffs))
        cos = self.cos_coeffs + (0.0,) * (order - len(self.cos_coeffs))
        sin = self.sin_coeffs + (0.0,) * (order - len(self.sin_coeffs))
        flat = [self.c0]
        for a, b in zip(cos, sin):
            flat.extend((a, b))
        return tuple(flat)

    def radius(self, theta: Union[float, ArrayLike]) -> np.ndarray:
        """r(θ), vectorized over θ."""
        theta = np.asarray(theta, dtype=np.float64)
        out = np.full(theta.shape, self.c0, dtype=np.float64)
        for k, a in enumerate(self.cos_coeffs, start=1):
            out += a * np.cos(k * theta)
        for k, b in enumerate(self.sin_coeffs, start=1):
            out += b * np.sin(k * theta)
        return out

    def derivative(self, theta: Union[float, ArrayLike]) -> np.ndarray:
        """r′(θ), vectorized over θ."""
        theta = np.asarray(theta, dtype=np.float64)
        out = np.zeros(theta.shape, dtype=np.float64)
        for k, a in enumerate(self.cos_coeffs, start=1):
            out -= k * a * np.sin(k * theta)
        for k, b in enumerate(self.sin_coeffs, start=1):
            out += k * b * np.cos(k * theta)
        return out

    def contains(self, points: ArrayLike) -> np.ndarray:
        """Boolean mask of points (…, 2) strictly inside D."""
        pts = np.asarray(points, dtype=np.float64)
        rho = np.hypot(pts[..., 0], pts[..., 1])
        return rho < self.radius(np.arctan2(pts[..., 1], pts[..., 0]))


@dataclass(frozen=True)
class Medium:
    """Contrast parameters of the Born far field.

    Attributes:
        n: Complex refractive index, Im(n) ≥ 0
        eta: Complex boundary conductivity, Im(eta) ≥ 0
    """

    n: complex = 4 + 2j
    eta: complex = 2 + 1j

    def __post_init__(self) -> None:
        """Validate absorption signs."""
        object.__setattr__(self, "n", complex(self.n))
        object.__setattr__(self, "eta", complex(self.eta))
        for label, value in (("n", self.n), ("eta", self.eta)):
            if not cmath.isfinite(value):
                raise DomainError(f"{label} must be finite, got {value}")
            if value.imag < 0:
                raise DomainError(f"Im({label}) must be nonnegative, got {value.imag}")


@dataclass(frozen=True)
class WaveConfig:
    """Wavenumber and equally spaced measurement/incident directions.

    Attributes:
        k: Wavenumber, > 0
        num_directions: N ≥ 2; θ_i = 2π(i − 1)/N
    """

    k: float = 1.0
    num_directions: int = 64

    def __post_init__(self) -> None:
        """Validate wavenumber and direction count."""
        if not (self.k > 0 and math.isfinite(self.k)):
            raise DomainError(f"k must be positive, got {self.k}")
        if self.num_directions < 2:
            raise DomainError(f"num_directions must be at least 2, got {self.num_directions}")

    @property
    def angles(self) -> np.ndarray:
        """Direction angles θ_i."""
        return 2.0 * np.pi * np.arange(self.num_directions) / self.num_directions

    @property
    def directions(self) -> np.ndarray:
        """Unit direction vectors, shape (N, 2)."""
        angles = self.angles
        return np.column_stack((np.cos(angles), np.sin(angles)))


@dataclass(frozen=True)
class QuadratureRule:
    """Point counts of the far-field quadrature.

    Attributes:
        radial_points: Gauss–Legendre points on [0, r(θ)]
        angular_points: Trapezoid points in θ for the volume term
        boundary_points: Trapezoid points in θ for the boundary term
    """

    radial_points: int = 32
    angular_points: int = 64
    boundary_points: int = 256

    def __post_init__(self) -> None:
        """Validate point counts."""
        for label in ("radial_points", "angular_points", "boundary_points"):
            if getattr(self, label) < 1:
                raise DomainError(f"{label} must be at least 1, got {getattr(self, label)}")

    def refined(self) -> "QuadratureRule":
        """Rule with every point count doubled."""
        return QuadratureRule(
            radial_points=2 * self.radial_points,
            angular_points=2 * self.angular_points,
            boundary_points=2 * self.boundary_points,
        )
