"""Deterministic file formats for matrices, fields and bound reports.

Matrix files::

    complex-matrix <rows> <cols>
    <re>:<im> <re>:<im> ...        # one line per row, 17 significant digits

Field CSV files carry ``#``-prefixed ``key=value`` metadata lines, then the
header ``x,y,w`` and one row per grid point (y outer, x inner). PGM images are
binary P5 with the top row at y_max.

Every writer goes through ``atomic_write`` (temporary file + ``os.replace``).
"""

import logging
import math
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, Iterable, List, Tuple, Union

import numpy as np

from src.core.perturb_verify import format_report_line
from src.exceptions import DataFormatError
from src.models.imaging import IndicatorField
from src.models.indicator import PicardReport
from src.models.spectra import ComplexMatrix
from src.models.verification import BoundReport, BoundStatus

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
MATRIX_MAGIC = "complex-matrix"


def atomic_write(path: PathLike, data: Union[str, bytes]) -> Path:
    """Write ``data`` to ``path`` through a temporary file in the same directory."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    payload = data.encode("utf-8") if isinstance(data, str) else data
    fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.parent)
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(payload)
        os.replace(tmp_name, target)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    logger.info("Wrote %s (%d bytes)", target, len(payload))
    return target


def _g17(value: float) -> str:
    return f"{value:.17g}"


# =============================================================================
# Matrices
# =============================================================================

def format_matrix(matrix: ComplexMatrix) -> str:
    """Text form of a complex matrix."""
    arr = np.asarray(matrix, dtype=np.complex128)
    if arr.ndim != 2:
        raise DataFormatError(f"expected a 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DataFormatError("cannot serialize non-finite matrix entries")
    rows, cols = arr.shape
    out = [f"{MATRIX_MAGIC} {rows} {cols}"]
    for row in arr:
        out.append(" ".join(f"{_g17(z.real)}:{_g17(z.imag)}" for z in row))
    return "\n".join(out) + "\n"


def write_matrix(matrix: ComplexMatrix, path: PathLike) -> Path:
    """Write a complex matrix; ``read_matrix`` restores it bit-exactly."""
    return atomic_write(path, format_matrix(matrix))


def _parse_entry(token: str, row: int, col: int) -> complex:
    try:
        re_part, im_part = token.split(":")
        value = complex(float(re_part), float(im_part))
    except ValueError as e:
        raise DataFormatError(f"row {row}, column {col}: malformed entry {token!r}") from e
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise DataFormatError(f"row {row}, column {col}: non-finite entry {token!r}")
    return value


def parse_matrix(text: str) -> ComplexMatrix:
    """Parse the text form produced by ``format_matrix``.

    Raises:
        DataFormatError: On a malformed header, wrong entry counts or bad entries
    """
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise DataFormatError("empty matrix file")
    header = lines[0].split()
    if len(header) != 3 or header[0] != MATRIX_MAGIC:
        raise DataFormatError(f"malformed header {lines[0]!r}")
    try:
        rows, cols = int(header[1]), int(header[2])
    except ValueError as e:
        raise DataFormatError(f"malformed header {lines[0]!r}") from e
    if rows < 1 or cols < 1:
        raise DataFormatError(f"matrix dimensions must be positive, got {rows}x{cols}")

    body = lines[1:]
    if len(body) < rows:
        raise DataFormatError(f"truncated file: row {len(body)} of {rows} is missing")
    if len(body) > rows:
        raise DataFormatError(f"expected {rows} rows, found {len(body)}")
    matrix = np.empty((rows, cols), dtype=np.complex128)
    for i, line in enumerate(body):
        tokens = line.split()
        if len(tokens) != cols:
            raise DataFormatError(f"row {i}: expected {cols} entries, found {len(tokens)}")
        matrix[i] = [_parse_entry(token, i, j) for j, token in enumerate(tokens)]
    return matrix


def read_matrix(path: PathLike) -> ComplexMatrix:
    """Read a matrix file written by ``write_matrix``."""
    matrix = parse_matrix(Path(path).read_text(encoding="utf-8"))
    logger.info("Read %dx%d matrix from %s", matrix.shape[0], matrix.shape[1], path)
    return matrix


# =============================================================================
# Indicator fields
# =============================================================================

def _meta_value(value: Any) -> str:
    if isinstance(value, float):
        return _g17(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def format_field_csv(field: IndicatorField) -> str:
    """CSV text of a field: metadata comments, header, then x,y,w rows."""
    out = [f"# {key}={_meta_value(field.metadata[key])}" for key in sorted(field.metadata)]
    out.append("x,y,w")
    xs, ys = field.grid.xs, field.grid.ys
    for iy, y in enumerate(ys):
        for ix, x in enumerate(xs):
            out.append(f"{_g17(x)},{_g17(y)},{_g17(field.values[iy, ix])}")
    return "\n".join(out) + "\n"


def write_field_csv(field: IndicatorField, path: PathLike) -> Path:
    """Write a field as CSV."""
    return atomic_write(path, format_field_csv(field))


def read_field_csv(path: PathLike) -> Tuple[Dict[str, str], np.ndarray]:
    """Read back metadata and the (P, 3) array of x, y, w rows."""
    metadata: Dict[str, str] = {}
    rows: List[List[float]] = []
    header_seen = False
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            metadata[key] = value
        elif not header_seen:
            if line.strip() != "x,y,w":
                raise DataFormatError(f"line {lineno}: expected header 'x,y,w'")
            header_seen = True
        elif line.strip():
            try:
                rows.append([float(v) for v in line.split(",")])
            except ValueError as e:
                raise DataFormatError(f"line {lineno}: malformed row {line!r}") from e
    return metadata, np.asarray(rows, dtype=np.float64).reshape(-1, 3)


def format_pgm(field: IndicatorField) -> bytes:
    """Binary P5 image with pixel = round(255·value), top row at y_max.

    Raises:
        DataFormatError: If values fall outside [0, 1]
    """
    values = field.values
    if np.any(values < 0) or np.any(values > 1):
        raise DataFormatError("PGM output needs a normalized field with values in [0, 1]")
    pixels = np.rint(255.0 * values[::-1, :]).astype(np.uint8)
    ny, nx = values.shape
    return f"P5\n{nx} {ny}\n255\n".encode("ascii") + pixels.tobytes()


def write_pgm(field: IndicatorField, path: PathLike) -> Path:
    """Write a normalized field as an 8-bit grayscale heatmap."""
    return atomic_write(path, format_pgm(field))


def write_picard_table(report: PicardReport, path: PathLike) -> Path:
    """``n,partial_sum`` table of a Picard report."""
    lines = ["n,partial_sum"]
    lines.extend(f"{n},{_g17(value)}" for n, value in enumerate(report.partial_sums, start=1))
    return atomic_write(path, "\n".join(lines) + "\n")


# =============================================================================
# Bound reports
# =============================================================================

def write_reports(reports: Iterable[BoundReport], path: PathLike) -> Path:
    """One ``format_report_line`` per report."""
    text = "".join(format_report_line(report) + "\n" for report in reports)
    return atomic_write(path, text)


def parse_report_line(line: str) -> BoundReport:
    """Inverse of ``format_report_line`` (metadata values stay strings)."""
    tokens = line.split()
    if len(tokens) < 5 or not tokens[4].startswith("status="):
        raise DataFormatError(f"malformed report line {line!r}")
    try:
        lhs, rhs = float(tokens[1]), float(tokens[2])
        status = BoundStatus(tokens[4].split("=", 1)[1])
    except ValueError as e:
        raise DataFormatError(f"malformed report line {line!r}") from e
    metadata = dict(token.split("=", 1) for token in tokens[5:])
    return BoundReport(bound_name=tokens[0], lhs=lhs, rhs=rhs, metadata=metadata, status=status)


def read_reports(path: PathLike) -> List[BoundReport]:
    """Read a report file written by ``write_reports``."""
    text = Path(path).read_text(encoding="utf-8")
    return [parse_report_line(line) for line in text.splitlines() if line.strip()]
