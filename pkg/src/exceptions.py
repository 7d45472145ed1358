"""Error hierarchy for the regularized factorization toolkit.

Every error carries the exit code the CLI returns when it escapes a
subcommand:

- 1: invalid input (dimensions, parameter domains, configuration)
- 2: numerical failure (empty spectrum, ill-posed cluster, failed decomposition)
- 3: malformed data files (I/O errors from the OS map to the same code)
"""

from typing import Optional


class RegFMError(Exception):
    """Base class for all library errors."""

    exit_code: int = 1


class InputValidationError(RegFMError, ValueError):
    """An argument violates a documented precondition."""

    exit_code = 1


class DimensionError(InputValidationError):
    """Matrix or vector shapes do not agree."""


class DomainError(InputValidationError):
    """A scalar parameter lies outside its admissible range."""


class FilterBoundError(InputValidationError):
    """The requested filter has no finite constant or Lipschitz bound."""


class ConfigError(InputValidationError):
    """A configuration line could not be accepted."""

    def __init__(self, message: str, line: Optional[int] = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NumericalError(RegFMError, ArithmeticError):
    """A numerical procedure could not produce a trustworthy result."""

    exit_code = 2


class DecompositionError(NumericalError):
    """The dense eigensolver did not converge."""


class EmptySpectrumError(NumericalError):
    """Every eigenvalue fell below the clamp threshold."""


class ClusterError(NumericalError):
    """An eigenvalue lies on the circle that delimits a spectral cluster."""


class DataFormatError(RegFMError, ValueError):
    """A matrix, field or report file is malformed."""

    exit_code = 3
