"""Synthetic far-field data from the Born approximation.

For incident direction ŷ and observation direction x̂, with d = x̂ − ŷ:

    u∞(x̂, ŷ) ≈ k²(n − 1) ∫_D e^{−ik ω·d} dω + η ∫_∂D e^{−ik ω·d} ds(ω)

The volume integral is taken in polar coordinates: Gauss–Legendre in ρ on
[0, r(θ)] times the periodic trapezoid rule in θ. The boundary integral uses
the trapezoid rule with arc-length factor √(r² + r′²).
"""

import logging
from typing import Tuple, Union

import numpy as np
import scipy.special
from numpy.polynomial.legendre import leggauss
from numpy.typing import ArrayLike

from src.core.spectra import operator_norm
from src.exceptions import DimensionError, DomainError
from src.models.scattering import Medium, NoiseNorm, QuadratureRule, ScattererGeometry, WaveConfig
from src.models.spectra import ComplexMatrix, ComplexVector, as_complex_matrix
from src.observability import track_stage

logger = logging.getLogger(__name__)

UNIT_TOL = 1e-12


def gauss_legendre(npts: int, a: float, b: float) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss–Legendre nodes and weights on [a, b].

    Exact for polynomials of degree ≤ 2·npts − 1.

    Raises:
        DomainError: If npts < 1 or a ≥ b
    """
    if npts < 1:
        raise DomainError(f"npts must be at least 1, got {npts}")
    if not a < b:
        raise DomainError(f"interval must satisfy a < b, got [{a}, {b}]")
    nodes, weights = leggauss(npts)
    half = 0.5 * (b - a)
    return half * nodes + 0.5 * (a + b), half * weights


def _trapezoid(points: int) -> Tuple[np.ndarray, float]:
    return 2.0 * np.pi * np.arange(points) / points, 2.0 * np.pi / points


def boundary_point(
    geometry: ScattererGeometry, theta: Union[float, ArrayLike]
) -> Tuple[np.ndarray, Union[float, np.ndarray]]:
    """Boundary point r(θ)(cos θ, sin θ) and arc-length factor √(r² + r′²).

    Returns a (2,) point and a float for scalar θ, and (…, 2) points with a
    matching jacobian array otherwise.
    """
    theta_arr = np.asarray(theta, dtype=np.float64)
    r = geometry.radius(theta_arr)
    dr = geometry.derivative(theta_arr)
    point = np.stack((r * np.cos(theta_arr), r * np.sin(theta_arr)), axis=-1)
    jacobian = np.hypot(r, dr)
    if theta_arr.ndim == 0:
        return point, float(jacobian)
    return point, jacobian


def _volume_integral(
    geometry: ScattererGeometry, d: np.ndarray, k: float, quad: QuadratureRule
) -> np.ndarray:
    """∫_D e^{−ik ω·d} dω for a batch of d vectors, shape (B, 2) → (B,)."""
    theta, h = _trapezoid(quad.angular_points)
    t, w = gauss_legendre(quad.radial_points, 0.0, 1.0)
    r = geometry.radius(theta)
    rho = r[:, None] * t[None, :]  # (M, L)
    # dρ = r dt, area element ρ dρ dθ
    weights = h * (r[:, None] * w[None, :]) * rho
    projection = d[:, 0:1] * np.cos(theta)[None, :] + d[:, 1:2] * np.sin(theta)[None, :]
    phase = np.exp(-1j * k * projection[:, :, None] * rho[None, :, :])
    return np.einsum("bml,ml->b", phase, weights)


def _boundary_integral(
    geometry: ScattererGeometry, d: np.ndarray, k: float, quad: QuadratureRule
) -> np.ndarray:
    """∫_∂D e^{−ik ω·d} ds(ω) for a batch of d vectors, shape (B, 2) → (B,)."""
    theta, h = _trapezoid(quad.boundary_points)
    points, jacobian = boundary_point(geometry, theta)
    phase = np.exp(-1j * k * (d @ points.T))
    return phase @ (h * jacobian)


def _born_batch(
    geometry: ScattererGeometry,
    medium: Medium,
    k: float,
    d: np.ndarray,
    quad: QuadratureRule,
) -> np.ndarray:
    volume = _volume_integral(geometry, d, k, quad)
    boundary = _boundary_integral(geometry, d, k, quad)
    return k ** 2 * (medium.n - 1.0) * volume + medium.eta * boundary


def _unit(vector: ArrayLike, label: str) -> np.ndarray:
    arr = np.asarray(vector, dtype=np.float64).reshape(-1)
    if arr.shape != (2,):
        raise DimensionError(f"{label} must be a 2-vector, got shape {arr.shape}")
    if abs(np.hypot(arr[0], arr[1]) - 1.0) > UNIT_TOL:
        raise DomainError(f"{label} must have unit length, got |{label}| = {np.hypot(*arr):.15g}")
    return arr


def born_farfield_entry(
    geometry: ScattererGeometry,
    medium: Medium,
    k: float,
    xhat: ArrayLike,
    yhat: ArrayLike,
    quad: QuadratureRule = QuadratureRule(),
) -> complex:
    """Born far field u∞(x̂, ŷ) by quadrature.

    Raises:
        DomainError: If x̂ or ŷ is not a unit vector
    """
    d = _unit(xhat, "xhat") - _unit(yhat, "yhat")
    return complex(_born_batch(geometry, medium, k, d[None, :], quad)[0])


def disk_born_closed_form(
    radius: float, medium: Medium, k: float, xhat: ArrayLike, yhat: ArrayLike
) -> complex:
    """Born far field of a disk through Bessel functions.

    k²(n − 1)·2πR·J₁(kR|d|)/(k|d|) + η·2πR·J₀(kR|d|), with the area πR²
    in place of the first fraction when d = 0.
    """
    if not radius > 0:
        raise DomainError(f"radius must be positive, got {radius}")
    d = _unit(xhat, "xhat") - _unit(yhat, "yhat")
    dist = float(np.hypot(d[0], d[1]))
    if dist == 0.0:
        volume = np.pi * radius ** 2
    else:
        volume = 2.0 * np.pi * radius * scipy.special.j1(k * radius * dist) / (k * dist)
    boundary = 2.0 * np.pi * radius * scipy.special.j0(k * radius * dist)
    return complex(k ** 2 * (medium.n - 1.0) * volume + medium.eta * boundary)


@track_stage("assemble_farfield")
def assemble_farfield(
    geometry: ScattererGeometry,
    medium: Medium,
    wave: WaveConfig,
    quad: QuadratureRule = QuadratureRule(),
) -> ComplexMatrix:
    """Far-field matrix F[i, j] = u∞(x̂_i, ŷ_j) over the wave's direction grid."""
    directions = wave.directions
    size = directions.shape[0]
    farfield = np.empty((size, size), dtype=np.complex128)
    for i in range(size):
        d = directions[i][None, :] - directions
        farfield[i] = _born_batch(geometry, medium, wave.k, d, quad)
    logger.info(
        "Assembled %dx%d far-field matrix for %s geometry (k=%g)",
        size,
        size,
        geometry.name,
        wave.k,
    )
    return farfield


def add_noise(
    farfield: ArrayLike,
    delta: float,
    seed: int,
    norm: Union[NoiseNorm, str] = NoiseNorm.SPECTRAL,
) -> ComplexMatrix:
    """Multiplicative noise F^δ_ij = F_ij (1 + δ E_ij).

    Re E and Im E are i.i.d. uniform on (−1, 1) before E is scaled to unit
    spectral (or Frobenius) norm.

    Raises:
        DomainError: If delta is negative
    """
    f = as_complex_matrix(farfield, square=False)
    if delta < 0 or not np.isfinite(delta):
        raise DomainError(f"delta must be nonnegative, got {delta}")
    if delta == 0:
        return f.copy()
    norm = NoiseNorm(norm)
    rng = np.random.default_rng(seed)
    noise = rng.uniform(-1.0, 1.0, f.shape) + 1j * rng.uniform(-1.0, 1.0, f.shape)
    scale = operator_norm(noise) if norm is NoiseNorm.SPECTRAL else float(np.linalg.norm(noise))
    noise /= scale
    logger.info("Added %s-normalized noise at delta=%g (seed %d)", norm.value, delta, seed)
    return f * (1.0 + delta * noise)


def rhs_matrix(points: ArrayLike, wave: WaveConfig) -> ComplexMatrix:
    """Columns ℓ_z = [e^{−ik x̂_i·z}]_i for each sampling point z, shape (N, P)."""
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    return np.exp(-1j * wave.k * (wave.directions @ pts.T))


def rhs_vector(z: ArrayLike, k: float, wave: WaveConfig) -> ComplexVector:
    """Test vector ℓ_z with components e^{−ik x̂_i·z} at wavenumber k."""
    point = np.asarray(z, dtype=np.float64).reshape(-1)
    if point.shape != (2,):
        raise DimensionError(f"z must be a 2-vector, got shape {point.shape}")
    return np.exp(-1j * k * (wave.directions @ point))
