"""Randomized verification of the spectral perturbation estimates.

Operators come from ``random_psd`` and are perturbed by ``perturb_operator``
with ‖A − A^δ‖₂ ≤ δ guaranteed by construction. Each ``check_*`` function
compares one estimate against a fresh measurement and returns a
``BoundReport``; ``run_sweep`` drives all of them over many seeds.

PRNG: ``numpy.random.default_rng`` (PCG64). Every report records the seed
that reproduces it.
"""

import logging
import math
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg
from numpy.typing import ArrayLike

from src.core.regularization import filter_constants, filter_value
from src.core.spectra import (
    compute_n_delta,
    hermitian_eigendecomposition,
    operator_norm,
    require_hermitian,
    spectral_projection,
    spectrum_distance,
)
from src.exceptions import DimensionError, DomainError
from src.models.regularization import FilterKind, FilterSpec
from src.models.spectra import (
    ComplexMatrix,
    HermitianEigensystem,
    as_complex_matrix,
    as_complex_vector,
)
from src.models.verification import BoundReport, BoundStatus
from src.observability import track_bound_check, track_stage

logger = logging.getLogger(__name__)

# eigenvalues closer than this (relative) form one cluster
CLUSTER_RTOL = 1e-10

DEFAULT_SWEEP_FILTER = FilterSpec(kind=FilterKind.TIKHONOV, alpha=1e-3)


def _record(report: BoundReport) -> BoundReport:
    track_bound_check(report.bound_name, report.status.value)
    if report.status is BoundStatus.VIOLATED:
        logger.error(
            "Bound %s violated: lhs=%.6e > rhs=%.6e (%s)",
            report.bound_name,
            report.lhs,
            report.rhs,
            report.metadata,
        )
    else:
        logger.debug("Bound %s %s", report.bound_name, report.status.value)
    return report


def _pair(a: ArrayLike, a_delta: ArrayLike) -> Tuple[ComplexMatrix, ComplexMatrix]:
    first = as_complex_matrix(a)
    second = as_complex_matrix(a_delta)
    if first.shape != second.shape:
        raise DimensionError(f"operators differ in shape: {first.shape} vs {second.shape}")
    return first, second


def _bound_delta(measured: float, delta: Optional[float]) -> float:
    """Noise level used in a bound: the nominal one if given, else ‖A − A^δ‖₂."""
    if delta is None:
        return measured
    if delta < measured * (1.0 - 1e-12):
        raise DomainError(f"nominal delta {delta:g} is below ‖A - A^δ‖₂ = {measured:g}")
    return delta


def cluster_gap(values: np.ndarray, index: int) -> float:
    """Distance from values[index] to the nearest eigenvalue outside its cluster."""
    center = values[index]
    tol = CLUSTER_RTOL * max(1.0, abs(center))
    others = np.abs(values - center)
    others = others[others > tol]
    return float(others.min()) if others.size else math.inf


# =============================================================================
# Operator generation
# =============================================================================

def random_psd(dim: int, seed: int, decay: float) -> ComplexMatrix:
    """Hermitian PSD matrix with eigenvalues decay^(n−1) in a random eigenbasis.

    The basis is the Q factor of a complex Gaussian matrix with the phases of
    diag(R) absorbed into Q, which makes it Haar distributed.

    Raises:
        DomainError: If dim < 1 or decay is outside (0, 1)
    """
    if dim < 1:
        raise DomainError(f"dim must be at least 1, got {dim}")
    if not 0.0 < decay < 1.0:
        raise DomainError(f"decay must lie in (0, 1), got {decay}")
    rng = np.random.default_rng(seed)
    gauss = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = scipy.linalg.qr(gauss)
    diag = np.diag(r)
    q = q * (diag / np.abs(diag))
    values = decay ** np.arange(dim, dtype=np.float64)
    matrix = (q * values) @ q.conj().T
    return 0.5 * (matrix + matrix.conj().T)


def perturb_operator(matrix: ArrayLike, delta: float, seed: int) -> ComplexMatrix:
    """A^δ = A + δ(P + ½I) with P random Hermitian, ‖P‖₂ = ½.

    The perturbation is PSD with 0 ≤ Δ ≤ δI, so ‖A − A^δ‖₂ ≤ δ and A^δ stays
    PSD whenever A is.

    Raises:
        DomainError: If delta is negative
        InputValidationError: If the matrix is not Hermitian
    """
    a = as_complex_matrix(matrix)
    require_hermitian(a)
    if delta < 0 or not math.isfinite(delta):
        raise DomainError(f"delta must be nonnegative, got {delta}")
    if delta == 0:
        return a.copy()

    dim = a.shape[0]
    rng = np.random.default_rng(seed)
    gauss = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    herm = 0.5 * (gauss + gauss.conj().T)
    herm *= 0.5 / operator_norm(herm)
    perturbation = delta * (herm + 0.5 * np.eye(dim))
    result = a + 0.5 * (perturbation + perturbation.conj().T)
    logger.debug("Perturbed %dx%d operator at delta=%.3e (seed %d)", dim, dim, delta, seed)
    return result


# =============================================================================
# Bound checks
# =============================================================================

def check_weyl(a: ArrayLike, a_delta: ArrayLike) -> BoundReport:
    """dist(spec A, spec A^δ) ≤ ‖A − A^δ‖₂."""
    first, second = _pair(a, a_delta)
    lhs = spectrum_distance(
        hermitian_eigendecomposition(first).values,
        hermitian_eigendecomposition(second).values,
    )
    rhs = operator_norm(first - second)
    return _record(BoundReport.compare("weyl", lhs, rhs, dim=first.shape[0]))


def check_eigenvalue_shift(a: ArrayLike, a_delta: ArrayLike) -> BoundReport:
    """max_n |λ_n^δ − λ_n| ≤ ‖A − A^δ‖₂ with both spectra sorted."""
    first, second = _pair(a, a_delta)
    shift = np.abs(
        hermitian_eigendecomposition(first).values - hermitian_eigendecomposition(second).values
    )
    rhs = operator_norm(first - second)
    return _record(
        BoundReport.compare("eigenvalue_shift", float(shift.max()), rhs, dim=first.shape[0])
    )


def _projection_pair(
    system: HermitianEigensystem,
    system_delta: HermitianEigensystem,
    index: int,
    rho_half: float,
) -> Tuple[ComplexMatrix, ComplexMatrix]:
    center = float(system.values[index])
    return (
        spectral_projection(system, center, rho_half),
        spectral_projection(system_delta, center, rho_half),
    )


def _projection_report(
    system: HermitianEigensystem,
    system_delta: HermitianEigensystem,
    n: int,
    delta: float,
    rho_half: Optional[float],
    **metadata,
) -> BoundReport:
    """Shared body of check_projection_bound once both spectra are known."""
    if not 1 <= n <= system.values.shape[0]:
        raise DomainError(f"n must lie in [1, {system.values.shape[0]}], got {n}")
    if delta == 0:
        return _record(BoundReport.compare("projection", 0.0, 0.0, n=n, delta=0.0, **metadata))
    if not 0.0 < delta < 0.25:
        raise DomainError(f"delta must lie in (0, 1/4), got {delta}")

    if rho_half is None:
        radius = math.sqrt(delta)
        rhs = 2.0 * math.sqrt(delta)
    else:
        if rho_half <= delta:
            raise DomainError(f"rho_half must exceed delta ({rho_half:g} <= {delta:g})")
        radius = rho_half
        rhs = delta / (rho_half - delta)

    gap = cluster_gap(system.values, n - 1)
    if gap < 2.0 * radius:
        return _record(
            BoundReport.skipped(
                "projection",
                f"gap {gap:.3e} below {2.0 * radius:.3e}",
                n=n,
                delta=delta,
                **metadata,
            )
        )
    p, p_delta = _projection_pair(system, system_delta, n - 1, radius)
    lhs = operator_norm(p - p_delta)
    return _record(
        BoundReport.compare("projection", lhs, rhs, n=n, delta=delta, rho_half=radius, **metadata)
    )


def check_projection_bound(
    a: ArrayLike,
    a_delta: ArrayLike,
    n: int,
    rho_half: Optional[float] = None,
    delta: Optional[float] = None,
) -> BoundReport:
    """‖P_n − P_n^δ‖₂ ≤ 2√δ, or δ/(ρ/2 − δ) for an explicit radius ρ/2.

    P_n projects onto the eigenvalue cluster of λ_n (1-based, non-increasing
    order). The check is skipped when λ_n is not isolated by at least twice
    the contour radius.

    Args:
        a: Unperturbed Hermitian operator
        a_delta: Perturbed Hermitian operator
        n: 1-based eigenvalue index
        rho_half: Contour radius; defaults to √δ
        delta: Nominal noise level ≥ ‖A − A^δ‖₂; defaults to the measured norm

    Raises:
        DomainError: If δ is outside (0, 1/4), n is out of range, or rho_half ≤ δ
    """
    first, second = _pair(a, a_delta)
    level = _bound_delta(operator_norm(first - second), delta)
    return _projection_report(
        hermitian_eigendecomposition(first),
        hermitian_eigendecomposition(second),
        n,
        level,
        rho_half,
    )


def check_projection_energy(
    a: ArrayLike, a_delta: ArrayLike, n: int, x: ArrayLike, delta: Optional[float] = None
) -> BoundReport:
    """‖P_n^δ x‖² − ‖P_n x‖² ≤ 4‖x‖²‖P_n − P_n^δ‖₂ with contour radius √δ."""
    first, second = _pair(a, a_delta)
    vec = as_complex_vector(x, first.shape[0])
    level = _bound_delta(operator_norm(first - second), delta)
    if level == 0:
        return _record(BoundReport.compare("projection_energy", 0.0, 0.0, n=n, delta=0.0))
    if not 0.0 < level < 0.25:
        raise DomainError(f"delta must lie in (0, 1/4), got {level}")

    system = hermitian_eigendecomposition(first)
    if not 1 <= n <= system.values.shape[0]:
        raise DomainError(f"n must lie in [1, {system.values.shape[0]}], got {n}")
    radius = math.sqrt(level)
    gap = cluster_gap(system.values, n - 1)
    if gap < 2.0 * radius:
        return _record(
            BoundReport.skipped(
                "projection_energy", f"gap {gap:.3e} below {2.0 * radius:.3e}", n=n, delta=level
            )
        )
    p, p_delta = _projection_pair(system, hermitian_eigendecomposition(second), n - 1, radius)
    lhs = float(np.linalg.norm(p_delta @ vec) ** 2 - np.linalg.norm(p @ vec) ** 2)
    rhs = 4.0 * float(np.vdot(vec, vec).real) * operator_norm(p - p_delta)
    return _record(BoundReport.compare("projection_energy", lhs, rhs, n=n, delta=level))


def _overlaps(system: HermitianEigensystem, ell: np.ndarray, count: int) -> np.ndarray:
    """|⟨x_n, ℓ⟩|² for the first ``count`` eigenvectors."""
    return np.abs(system.vectors[:, :count].conj().T @ ell) ** 2


def _stable_depth(values: np.ndarray, delta: float) -> Tuple[int, Optional[str]]:
    """N(δ) on the positive spectrum, and a skip reason if a mode below it is not isolated."""
    positive = values[values > 0]
    if positive.size == 0:
        return 0, None
    depth = compute_n_delta(positive, delta)
    for index in range(depth):
        gap = cluster_gap(positive, index)
        if gap < 2.0 * math.sqrt(delta):
            return depth, f"mode {index + 1} below N(delta)={depth} has gap {gap:.3e}"
    return depth, None


def check_pconv_sum(
    a: ArrayLike, a_delta: ArrayLike, ell: ArrayLike, delta: Optional[float] = None
) -> BoundReport:
    """Σ_{n≤N(δ)} [|⟨x_n^δ, ℓ⟩|² − |⟨x_n, ℓ⟩|²] ≤ δ^(1/4)‖ℓ‖².

    Only the signed sum is bound-checked; the sum of absolute differences is
    reported in the metadata as ``abs_sum``.
    """
    first, second = _pair(a, a_delta)
    vec = as_complex_vector(ell, first.shape[0])
    level = _bound_delta(operator_norm(first - second), delta)
    norm_sq = float(np.vdot(vec, vec).real)
    if level == 0:
        return _record(BoundReport.compare("pconv_sum", 0.0, 0.0, n_delta=0, delta=0.0))
    if not 0.0 < level < 0.25:
        raise DomainError(f"delta must lie in (0, 1/4), got {level}")

    system = hermitian_eigendecomposition(first)
    depth, reason = _stable_depth(system.values, level)
    if reason is not None:
        return _record(BoundReport.skipped("pconv_sum", reason, n_delta=depth, delta=level))

    rhs = level ** 0.25 * norm_sq
    if depth == 0:
        return _record(
            BoundReport.compare("pconv_sum", 0.0, rhs, n_delta=0, delta=level, abs_sum=0.0)
        )
    diffs = _overlaps(hermitian_eigendecomposition(second), vec, depth) - _overlaps(
        system, vec, depth
    )
    return _record(
        BoundReport.compare(
            "pconv_sum",
            float(diffs.sum()),
            rhs,
            n_delta=depth,
            delta=level,
            abs_sum=float(np.abs(diffs).sum()),
        )
    )


def check_indicator_bounds(
    a: ArrayLike,
    a_delta: ArrayLike,
    ell: ArrayLike,
    spec: FilterSpec,
    delta: Optional[float] = None,
) -> List[BoundReport]:
    """Finite-δ sandwich of the perturbed indicator I^δ = ⟨x^{δ,α}, A^δ x^{δ,α}⟩.

    With S_N = Σ_{n≤N(δ)} φ²(λ_n^δ)/λ_n^δ · |⟨x_n, ℓ⟩|² and C = C_α² ‖ℓ‖²:

    - lower:  S_N − C·λ₁^δ·δ^(1/4) ≤ I^δ
    - upper:  I^δ ≤ S_N + C·λ_{N+1}^δ + C·λ₁^δ·δ^(1/4)

    A Landweber spec without beta uses 1/(2(λ₁^δ)²).

    Returns:
        List[BoundReport]: The lower and the upper report, each as lhs ≤ rhs

    Raises:
        FilterBoundError: For the identity filter
    """
    first, second = _pair(a, a_delta)
    vec = as_complex_vector(ell, first.shape[0])
    level = _bound_delta(operator_norm(first - second), delta)
    if not 0.0 < level < 0.25:
        raise DomainError(f"delta must lie in (0, 1/4), got {level}")

    system = hermitian_eigendecomposition(first)
    system_delta = hermitian_eigendecomposition(second)
    lam_delta = np.clip(system_delta.values, 0.0, None)
    spec = spec.with_beta(float(lam_delta[0]))
    _, c_alpha = filter_constants(spec)

    depth, reason = _stable_depth(system.values, level)
    if reason is not None:
        return [
            _record(BoundReport.skipped(name, reason, n_delta=depth, delta=level))
            for name in ("indicator_lower", "indicator_upper")
        ]

    positive = lam_delta > 0
    weights = np.zeros_like(lam_delta)
    weights[positive] = np.asarray(filter_value(spec, lam_delta[positive])) ** 2 / lam_delta[
        positive
    ]
    indicator = float(np.dot(weights, _overlaps(system_delta, vec, vec.shape[0])))
    truncated = float(np.dot(weights[:depth], _overlaps(system, vec, depth)))

    scale = c_alpha ** 2 * float(np.vdot(vec, vec).real)
    middle = scale * float(lam_delta[0]) * level ** 0.25
    tail = scale * float(lam_delta[depth]) if depth < lam_delta.shape[0] else 0.0
    meta = {"n_delta": depth, "delta": level, "filter": spec.kind.value, "alpha": spec.alpha}
    return [
        _record(BoundReport.compare("indicator_lower", truncated - middle, indicator, **meta)),
        _record(
            BoundReport.compare("indicator_upper", indicator, truncated + tail + middle, **meta)
        ),
    ]


# =============================================================================
# Sweeps and report serialization
# =============================================================================

@track_stage("verify_sweep")
def run_sweep(
    dims: Sequence[int],
    deltas: Sequence[float],
    trials: int,
    decay: float = 0.5,
    seed: int = 0,
    spec: FilterSpec = DEFAULT_SWEEP_FILTER,
) -> List[BoundReport]:
    """Run every bound check over random (A, A^δ, ℓ) triples.

    Trial seeds are drawn from ``default_rng(seed)``; trial ``s`` uses seed
    ``s`` for A, ``s + 1`` for the perturbation and ``s + 2`` for ℓ, and its
    reports carry ``seed=s``.

    Returns:
        List[BoundReport]: Reports in (dim, delta, trial) order
    """
    if trials < 1:
        raise DomainError(f"trials must be at least 1, got {trials}")
    rng = np.random.default_rng(seed)
    reports: List[BoundReport] = []

    for dim in dims:
        for delta in deltas:
            for trial in range(trials):
                trial_seed = int(rng.integers(0, 2 ** 31 - 3))
                reports.extend(_run_trial(dim, delta, decay, trial_seed, spec))
            logger.info("Verified dim=%d delta=%.1e over %d trials", dim, delta, trials)

    violated = sum(1 for r in reports if r.status is BoundStatus.VIOLATED)
    skipped = sum(1 for r in reports if r.status is BoundStatus.SKIPPED)
    if skipped:
        logger.warning("%d of %d bound checks skipped (gap precondition)", skipped, len(reports))
    logger.info("Sweep finished: %d reports, %d violated", len(reports), violated)
    return reports


def _run_trial(
    dim: int, delta: float, decay: float, trial_seed: int, spec: FilterSpec
) -> Iterable[BoundReport]:
    a = random_psd(dim, trial_seed, decay)
    a_delta = perturb_operator(a, delta, trial_seed + 1)
    rng = np.random.default_rng(trial_seed + 2)
    ell = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)

    meta = {"dim": dim, "seed": trial_seed}
    system = hermitian_eigendecomposition(a)
    system_delta = hermitian_eigendecomposition(a_delta)

    out = [check_weyl(a, a_delta), check_eigenvalue_shift(a, a_delta)]
    for n in range(1, dim + 1):
        out.append(_projection_report(system, system_delta, n, delta, None, **meta))
    out.append(check_projection_energy(a, a_delta, 1, ell, delta=delta))
    out.append(check_pconv_sum(a, a_delta, ell, delta=delta))
    out.extend(check_indicator_bounds(a, a_delta, ell, spec, delta=delta))
    return [_with_meta(report, meta) for report in out]


def _with_meta(report: BoundReport, meta: dict) -> BoundReport:
    merged = {**meta, **report.metadata}
    return BoundReport(
        bound_name=report.bound_name,
        lhs=report.lhs,
        rhs=report.rhs,
        metadata=merged,
        status=report.status,
    )


def _format_value(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value).replace(" ", "_")


def format_report_line(report: BoundReport) -> str:
    """Serialize as ``bound_name lhs rhs satisfied status=... key=value ...``.

    Metadata keys are written in sorted order.
    """
    fields = [
        report.bound_name,
        _format_value(float(report.lhs)),
        _format_value(float(report.rhs)),
        _format_value(report.satisfied),
        f"status={report.status.value}",
    ]
    fields.extend(f"{key}={_format_value(report.metadata[key])}" for key in sorted(report.metadata))
    return " ".join(fields)
