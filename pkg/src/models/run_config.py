"""Run configuration: every parameter of one pipeline invocation.

Each section is a pydantic model with ``extra="forbid"`` so unknown keys are
rejected. Defaults reproduce the reference experiment: star scatterer,
n = 4 + 2i, η = 2 + i, k = 1, 64 directions.
"""

# pylint: disable=too-few-public-methods
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.config import get_settings
from src.models.imaging import SamplingGrid
from src.models.regularization import FilterKind, FilterSpec, ParamRule
from src.models.scattering import Medium, NoiseNorm, QuadratureRule, ScattererGeometry, WaveConfig


def _split_list(value):
    """Accept ``"a, b, c"`` as well as a list."""
    if isinstance(value, str):
        items = [item.strip() for item in value.split(",")]
        return [item for item in items if item]
    return value


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class GeometrySection(_Section):
    """Scatterer shape."""

    preset: Literal["star", "disk"] = Field(default="star", description="Named geometry")
    radius: float = Field(default=0.5, gt=0, description="Disk radius (preset=disk)")
    coeffs: Optional[List[float]] = Field(
        default=None, description="c0, a1, b1, a2, b2, ... (overrides preset)"
    )

    @field_validator("coeffs", mode="before")
    @classmethod
    def split_coeffs(cls, v):
        """Accept a comma-separated string."""
        return _split_list(v)

    @field_validator("coeffs")
    @classmethod
    def validate_coeffs(cls, v: Optional[List[float]]) -> Optional[List[float]]:
        """c0 followed by complete (a_k, b_k) pairs."""
        if v is not None and (not v or len(v) % 2 == 0):
            raise ValueError("coeffs must be c0 followed by (a_k, b_k) pairs")
        return v

    @model_validator(mode="after")
    def validate_shape(self) -> "GeometrySection":
        """The radius must stay positive for every theta."""
        self.build()
        return self

    def build(self) -> ScattererGeometry:
        """Materialize the geometry."""
        if self.coeffs is not None:
            return ScattererGeometry.from_coeffs(self.coeffs)
        if self.preset == "disk":
            return ScattererGeometry.disk(self.radius)
        return ScattererGeometry.star()


class MediumSection(_Section):
    """Contrast parameters."""

    n_re: float = Field(default=4.0, description="Re n")
    n_im: float = Field(default=2.0, ge=0, description="Im n (absorption, nonnegative)")
    eta_re: float = Field(default=2.0, description="Re eta")
    eta_im: float = Field(default=1.0, ge=0, description="Im eta (nonnegative)")

    def build(self) -> Medium:
        """Materialize the medium."""
        return Medium(n=complex(self.n_re, self.n_im), eta=complex(self.eta_re, self.eta_im))


class WaveSection(_Section):
    """Incident waves and measurement directions."""

    k: float = Field(default=1.0, gt=0, description="Wavenumber")
    directions: int = Field(default=64, ge=2, description="Number of equally spaced directions")

    def build(self) -> WaveConfig:
        """Materialize the wave configuration."""
        return WaveConfig(k=self.k, num_directions=self.directions)


class QuadSection(_Section):
    """Quadrature point counts."""

    radial: int = Field(default=32, ge=1, description="Gauss-Legendre points in rho")
    angular: int = Field(default=64, ge=1, description="Trapezoid points in theta (volume)")
    boundary: int = Field(default=256, ge=1, description="Trapezoid points on the boundary")

    def build(self) -> QuadratureRule:
        """Materialize the quadrature rule."""
        return QuadratureRule(
            radial_points=self.radial, angular_points=self.angular, boundary_points=self.boundary
        )


class NoiseSection(_Section):
    """Multiplicative data noise."""

    delta: float = Field(default=0.0, ge=0, description="Noise level")
    seed: int = Field(default=0, ge=0, description="Noise seed")
    norm: NoiseNorm = Field(default=NoiseNorm.SPECTRAL, description="Normalization of E")


class FilterSection(_Section):
    """Regularization filter and parameter rule."""

    kind: FilterKind = Field(default=FilterKind.LANDWEBER, description="Filter family")
    alpha: float = Field(default=1e-5, gt=0, description="Regularization parameter")
    beta: Optional[float] = Field(
        default=None, gt=0, description="Landweber step; default 1/(2 ||F#||^2)"
    )
    p: float = Field(default=0.125, description="Exponent of the parameter rule")
    auto: bool = Field(default=False, description="Choose alpha from noise.delta")

    @field_validator("kind", mode="before")
    @classmethod
    def normalize_kind(cls, v):
        """Filter names are case-insensitive."""
        return v.lower() if isinstance(v, str) else v

    @field_validator("p")
    @classmethod
    def validate_p(cls, v: float) -> float:
        """The rule needs p in (0, 1/4)."""
        if not 0.0 < v < 0.25:
            raise ValueError(f"p must lie in (0, 1/4), got {v}")
        return v

    def build(self) -> FilterSpec:
        """Filter with the configured alpha (auto selection happens in the pipeline)."""
        return FilterSpec(kind=self.kind, alpha=self.alpha, beta=self.beta)

    def rule(self, operator_norm: Optional[float] = None) -> ParamRule:
        """Parameter rule with this exponent."""
        return ParamRule(p=self.p, operator_norm=operator_norm)


class GridSection(_Section):
    """Sampling grid."""

    x_min: float = -1.0
    x_max: float = 1.0
    y_min: float = -1.0
    y_max: float = 1.0
    nx: int = Field(default=128, ge=2)
    ny: int = Field(default=128, ge=2)

    @model_validator(mode="after")
    def validate_bounds(self) -> "GridSection":
        """Bounds must be ordered."""
        if not self.x_min < self.x_max or not self.y_min < self.y_max:
            raise ValueError("grid bounds must satisfy x_min < x_max and y_min < y_max")
        return self

    def build(self) -> SamplingGrid:
        """Materialize the grid."""
        return SamplingGrid(**self.model_dump())


class SpectraSection(_Section):
    """Spectral truncation."""

    clamp_rel: float = Field(
        default_factory=lambda: get_settings().default_clamp_rel,
        ge=0,
        lt=1,
        description="Relative eigenvalue clamp, REGFM_DEFAULT_CLAMP_REL when omitted",
    )


class OutputSection(_Section):
    """Reconstruction outputs."""

    threshold: float = Field(default=0.5, gt=0, lt=1, description="Jaccard threshold level")
    csv: bool = Field(default=True, description="Write the field as CSV")
    pgm: bool = Field(default=True, description="Write the field as PGM heatmap")


class VerifySection(_Section):
    """Perturbation-bound sweep."""

    dims: List[int] = Field(default_factory=lambda: [8, 32])
    deltas: List[float] = Field(default_factory=lambda: [1e-2, 1e-4])
    trials: int = Field(default=200, ge=1)
    decay: float = Field(default=0.5, gt=0, lt=1)
    seed: int = Field(default=0, ge=0)

    @field_validator("dims", "deltas", mode="before")
    @classmethod
    def split_lists(cls, v):
        """Accept comma-separated strings."""
        return _split_list(v)

    @field_validator("dims")
    @classmethod
    def validate_dims(cls, v: List[int]) -> List[int]:
        """Dimensions are positive and at least one is given."""
        if not v or any(d < 1 for d in v):
            raise ValueError("dims must be a non-empty list of positive integers")
        return v

    @field_validator("deltas")
    @classmethod
    def validate_deltas(cls, v: List[float]) -> List[float]:
        """Noise levels lie in (0, 1/4)."""
        if not v or any(not 0.0 < d < 0.25 for d in v):
            raise ValueError("deltas must be a non-empty list of values in (0, 1/4)")
        return v


class RunConfig(_Section):
    """Complete, validated configuration of one run."""

    geometry: GeometrySection = Field(default_factory=GeometrySection)
    medium: MediumSection = Field(default_factory=MediumSection)
    wave: WaveSection = Field(default_factory=WaveSection)
    quad: QuadSection = Field(default_factory=QuadSection)
    noise: NoiseSection = Field(default_factory=NoiseSection)
    filter: FilterSection = Field(default_factory=FilterSection)
    grid: GridSection = Field(default_factory=GridSection)
    spectra: SpectraSection = Field(default_factory=SpectraSection)
    output: OutputSection = Field(default_factory=OutputSection)
    verify: VerifySection = Field(default_factory=VerifySection)

    @model_validator(mode="after")
    def validate_auto_alpha(self) -> "RunConfig":
        """Automatic alpha needs a noise level in (0, 1) and a regularizing filter."""
        if self.filter.auto:
            if not 0.0 < self.noise.delta < 1.0:
                raise ValueError("filter.auto needs noise.delta in (0, 1)")
            if self.filter.kind is FilterKind.IDENTITY:
                raise ValueError("filter.auto cannot be used with the identity filter")
        return self

    def with_seed(self, seed: int) -> "RunConfig":
        """Copy with every seed replaced (the ``--seed`` override)."""
        return self.model_copy(
            update={
                "noise": NoiseSection(**{**self.noise.model_dump(), "seed": seed}),
                "verify": VerifySection(**{**self.verify.model_dump(), "seed": seed}),
            }
        )
