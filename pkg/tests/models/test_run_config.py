"""Tests for the validated run configuration model."""

import pytest
from pydantic import ValidationError

from src.config import get_settings
from src.models.regularization import FilterKind
from src.models.run_config import (
    FilterSection,
    GeometrySection,
    GridSection,
    RunConfig,
    VerifySection,
)
from src.models.scattering import NoiseNorm
from src.services.config_parser import parse_config


class TestDefaults:
    """Test the default experiment."""

    def test_reference_experiment(self):
        """Star, n = 4 + 2i, η = 2 + i, k = 1, 64 directions."""
        config = RunConfig()
        assert config.geometry.build().name == "star"
        medium = config.medium.build()
        assert medium.n == 4 + 2j and medium.eta == 2 + 1j
        wave = config.wave.build()
        assert wave.k == 1.0 and wave.num_directions == 64
        assert config.noise.norm is NoiseNorm.SPECTRAL
        assert config.filter.kind is FilterKind.LANDWEBER
        assert config.grid.build().shape == (128, 128)

    def test_quadrature_defaults(self):
        """32 radial, 64 angular and 256 boundary points."""
        quad = RunConfig().quad.build()
        assert (quad.radial_points, quad.angular_points, quad.boundary_points) == (32, 64, 256)

    def test_clamp_follows_settings(self, monkeypatch):
        """REGFM_DEFAULT_CLAMP_REL fills an omitted spectra.clamp_rel."""
        monkeypatch.setenv("REGFM_DEFAULT_CLAMP_REL", "1e-10")
        get_settings.cache_clear()
        assert RunConfig().spectra.clamp_rel == 1e-10
        assert parse_config("").spectra.clamp_rel == 1e-10
        explicit = parse_config("spectra.clamp_rel = 1e-6\n")
        assert explicit.spectra.clamp_rel == 1e-6

    def test_clamp_default(self):
        """Without the variable the clamp is 1e-14."""
        assert RunConfig().spectra.clamp_rel == 1e-14


class TestSections:
    """Test per-section validation."""

    def test_geometry_coeffs_from_string(self):
        """Comma-separated coefficients."""
        section = GeometrySection(coeffs="0.5, 0.0, 0.1")
        assert section.build().sin_coeffs == (0.1,)

    def test_geometry_rejects_negative_radius(self):
        """The shape is validated by building it."""
        with pytest.raises(ValidationError):
            GeometrySection(coeffs=[0.1, 0.5, 0.0])

    def test_disk_preset(self):
        """preset = disk uses the configured radius."""
        geometry = GeometrySection(preset="disk", radius=0.25).build()
        assert geometry.is_disk and geometry.c0 == 0.25

    def test_filter_kind_case_insensitive(self):
        """Filter names ignore case."""
        assert FilterSection(kind="Tikhonov").kind is FilterKind.TIKHONOV

    def test_filter_p_domain(self):
        """p outside (0, 1/4) is rejected."""
        with pytest.raises(ValidationError, match="p must lie"):
            FilterSection(p=0.3)

    def test_grid_bounds(self):
        """Bounds must be ordered."""
        with pytest.raises(ValidationError):
            GridSection(x_min=1.0, x_max=0.0)

    def test_verify_lists(self):
        """dims and deltas accept comma-separated strings."""
        section = VerifySection(dims="4, 8", deltas="1e-2,1e-3")
        assert section.dims == [4, 8]
        assert section.deltas == [1e-2, 1e-3]

    @pytest.mark.parametrize("kwargs", [{"dims": "0"}, {"deltas": "0.3"}, {"dims": ""}])
    def test_verify_invalid(self, kwargs):
        """Positive dims, deltas in (0, 1/4)."""
        with pytest.raises(ValidationError):
            VerifySection(**kwargs)

    def test_unknown_field(self):
        """Sections forbid extra keys."""
        with pytest.raises(ValidationError):
            GridSection(nz=3)


class TestRunConfig:
    """Test cross-section rules."""

    def test_auto_alpha_needs_noise(self):
        """filter.auto needs δ in (0, 1)."""
        with pytest.raises(ValidationError, match="noise.delta"):
            RunConfig(filter={"auto": True})

    def test_auto_alpha_rejects_identity(self):
        """The identity filter has no parameter."""
        with pytest.raises(ValidationError, match="identity"):
            RunConfig(filter={"auto": True, "kind": "identity"}, noise={"delta": 0.01})

    def test_with_seed(self):
        """--seed replaces every seed."""
        config = RunConfig(noise={"seed": 3}, verify={"seed": 4}).with_seed(9)
        assert config.noise.seed == 9
        assert config.verify.seed == 9

    def test_with_seed_validates(self):
        """Negative seeds are rejected."""
        with pytest.raises(ValidationError):
            RunConfig().with_seed(-1)

    def test_frozen(self):
        """Configurations are immutable."""
        config = RunConfig()
        with pytest.raises(ValidationError):
            config.noise.delta = 0.5
