"""Tests for matrix, field, image and report file formats."""

import numpy as np
import pytest

from src.exceptions import DataFormatError
from src.models.imaging import IndicatorField, SamplingGrid
from src.models.indicator import PicardReport
from src.models.verification import BoundReport, BoundStatus
from src.services.file_formats import (
    atomic_write,
    format_field_csv,
    format_matrix,
    format_pgm,
    parse_matrix,
    parse_report_line,
    read_field_csv,
    read_matrix,
    read_reports,
    write_matrix,
    write_picard_table,
    write_reports,
)


@pytest.fixture
def field():
    """3x2 field with metadata."""
    grid = SamplingGrid(0.0, 1.0, 0.0, 2.0, nx=2, ny=3)
    values = np.array([[0.0, 0.5], [1.0, 0.25], [0.75, 0.1]])
    return IndicatorField(grid, values, metadata={"filter": "glsm", "alpha": 0.01, "seed": 2})


class TestAtomicWrite:
    """Test atomic file replacement."""

    def test_creates_parents_and_leaves_no_temp(self, tmp_path):
        """Parent directories are created and only the target remains."""
        target = tmp_path / "a" / "b" / "out.txt"
        atomic_write(target, "hello\n")
        assert target.read_text() == "hello\n"
        assert [p.name for p in target.parent.iterdir()] == ["out.txt"]

    def test_bytes(self, tmp_path):
        """Binary payloads are written unchanged."""
        target = atomic_write(tmp_path / "x.bin", b"\x00\xff")
        assert target.read_bytes() == b"\x00\xff"


class TestMatrixFormat:
    """Test the complex matrix text format."""

    def test_bit_exact_round_trip(self, tmp_path, rng):
        """17 significant digits restore every double."""
        matrix = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        matrix[0, 0] = 1e-300 - 3.5e200j
        path = write_matrix(matrix, tmp_path / "f.txt")
        np.testing.assert_array_equal(read_matrix(path), matrix)

    def test_layout(self):
        """Header then one row per line."""
        text = format_matrix(np.array([[1 + 2j, complex(0.0, -0.5)]]))
        assert text == "complex-matrix 1 2\n1:2 0:-0.5\n"

    @pytest.mark.parametrize(
        "text,message",
        [
            ("", "empty"),
            ("matrix 2 2\n", "malformed header"),
            ("complex-matrix two 2\n", "malformed header"),
            ("complex-matrix 0 2\n", "positive"),
            ("complex-matrix 2 1\n1:0\n", "truncated"),
            ("complex-matrix 1 1\n1:0\n2:0\n", "expected 1 rows"),
            ("complex-matrix 1 2\n1:0\n", "expected 2 entries"),
            ("complex-matrix 1 1\n1;0\n", "malformed entry"),
            ("complex-matrix 1 1\nnan:0\n", "non-finite"),
        ],
    )
    def test_malformed(self, text, message):
        """Every malformation is a DataFormatError."""
        with pytest.raises(DataFormatError, match=message):
            parse_matrix(text)

    def test_refuses_non_finite_output(self):
        """Non-finite entries are never serialized."""
        with pytest.raises(DataFormatError):
            format_matrix(np.array([[np.inf]]))

    def test_missing_file(self, tmp_path):
        """Missing files surface as OSError."""
        with pytest.raises(OSError):
            read_matrix(tmp_path / "absent.txt")


class TestFieldCSV:
    """Test field CSV output."""

    def test_layout(self, field):
        """Sorted metadata comments, header, then y-outer rows."""
        lines = format_field_csv(field).splitlines()
        assert lines[:4] == ["# alpha=0.01", "# filter=glsm", "# seed=2", "x,y,w"]
        assert lines[4] == "0,0,0"
        assert lines[5] == "1,0,0.5"
        assert lines[6] == "0,1,1"
        assert len(lines) == 4 + 6

    def test_read_back(self, field, tmp_path):
        """read_field_csv returns metadata and x, y, w rows."""
        path = tmp_path / "field.csv"
        path.write_text(format_field_csv(field))
        metadata, rows = read_field_csv(path)
        assert metadata["filter"] == "glsm"
        assert rows.shape == (6, 3)
        np.testing.assert_array_equal(rows[:, 2], field.values.ravel())

    def test_bad_header(self, tmp_path):
        """A missing header is a format error."""
        path = tmp_path / "bad.csv"
        path.write_text("a,b,c\n")
        with pytest.raises(DataFormatError, match="header"):
            read_field_csv(path)


class TestPGM:
    """Test PGM heatmaps."""

    def test_header_and_flip(self, field):
        """P5 header, top row is y_max."""
        data = format_pgm(field)
        header = b"P5\n2 3\n255\n"
        assert data.startswith(header)
        pixels = np.frombuffer(data[len(header):], dtype=np.uint8).reshape(3, 2)
        np.testing.assert_array_equal(pixels[0], [191, 26])
        np.testing.assert_array_equal(pixels[2], [0, 128])

    def test_requires_normalized_field(self):
        """Values above 1 are refused."""
        field = IndicatorField(SamplingGrid(nx=2, ny=2), np.full((2, 2), 2.0))
        with pytest.raises(DataFormatError, match="normalized"):
            format_pgm(field)


class TestPicardTable:
    """Test the Picard CSV table."""

    def test_layout(self, tmp_path):
        """One ``n,partial_sum`` row per mode."""
        path = write_picard_table(PicardReport(np.array([1.0, 2.5]), 2), tmp_path / "p.csv")
        assert path.read_text() == "n,partial_sum\n1,1\n2,2.5\n"


class TestReports:
    """Test bound report files."""

    def test_round_trip(self, tmp_path):
        """write_reports and read_reports agree on status and numbers."""
        reports = [
            BoundReport.compare("weyl", 0.1, 0.2, dim=8, seed=1),
            BoundReport.skipped("projection", "gap below radius", n=3),
        ]
        path = write_reports(reports, tmp_path / "r.txt")
        restored = read_reports(path)
        assert [r.bound_name for r in restored] == ["weyl", "projection"]
        assert restored[0].lhs == 0.1 and restored[0].rhs == 0.2
        assert restored[0].metadata == {"dim": "8", "seed": "1"}
        assert restored[1].status is BoundStatus.SKIPPED

    def test_malformed_line(self):
        """Lines without a status token are rejected."""
        with pytest.raises(DataFormatError):
            parse_report_line("weyl 0.1 0.2 true")
