"""Exception hierarchy shared by the numerical core and the CLI.

Every error raised on purpose by this package derives from
:class:`FracLapError`. The CLI maps an exception to a process exit code
through the class-level ``exit_code`` attribute, so new error types only
need to pick the right base class:

* :class:`DomainError` and its subclasses (bad argument, bad grid, step
  above a stability bound) and :class:`ConfigError` exit with 2.
* :class:`NumericalError` (something that should have converged did not)
  exits with 3.
"""

from __future__ import annotations


class FracLapError(Exception):
    """Base class for all deliberate errors."""

    exit_code: int = 1


class DomainError(FracLapError):
    """An argument lies outside the admissible range of an operation."""

    exit_code = 2


class ConfigError(FracLapError):
    """Configuration file or command-line flags could not be interpreted."""

    exit_code = 2


class GridMismatchError(DomainError):
    """Fields and weights disagree on the grid, or an index range is invalid."""


class CFLViolation(DomainError):
    """A time step exceeds the stability restriction of an explicit scheme."""


class NumericalError(FracLapError):
    """A series, quadrature, solve or fit failed to reach its tolerance."""

    exit_code = 3
