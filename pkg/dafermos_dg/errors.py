"""
Exception hierarchy for dafermos-dg.

Every error raised on purpose by the package derives from DafermosError.
Most also derive from the closest builtin, so callers that only know about
ValueError or ArithmeticError keep working.
"""

from __future__ import annotations

from typing import Any, Optional


class DafermosError(Exception):
    """Base class of all package errors."""


class InvalidOrderError(DafermosError, ValueError):
    """A quadrature rule or polynomial basis was requested with an invalid order."""


class InvalidMeshError(DafermosError, ValueError):
    """A mesh or cell length is not usable (nonpositive length, empty domain)."""


class InvalidArgumentError(DafermosError, ValueError):
    """An argument is structurally invalid (empty list, unknown name)."""


class NonFiniteStateError(DafermosError, FloatingPointError):
    """
    Non-finite values were found in a state, a flux or an intermediate result.

    The offending cell is recorded when it is known.
    """

    def __init__(self, message: str, cell: Optional[int] = None):
        if cell is not None:
            message = f"{message} (cell {cell})"
        super().__init__(message)
        self.cell = cell


class BlowUpError(DafermosError, ArithmeticError):
    """
    A time integration left the admissible range.

    `time` is the last simulation time that was reached with a valid state,
    `partial` the solution collected up to that point (set by the solvers).
    """

    def __init__(self, time: float, message: str = "solution blew up", partial: Any = None):
        super().__init__(f"{message} at t={time:.17g}")
        self.time = time
        self.partial = partial


class NoClassicalSolutionError(DafermosError, ArithmeticError):
    """The characteristic equation has no unique solution (the data has broken)."""


class UsageError(DafermosError, ValueError):
    """Invalid configuration or command line."""


__all__ = [
    "DafermosError",
    "InvalidOrderError",
    "InvalidMeshError",
    "InvalidArgumentError",
    "NonFiniteStateError",
    "BlowUpError",
    "NoClassicalSolutionError",
    "UsageError",
]
