"""Exception hierarchy shared by the engine and the CLI."""

from __future__ import annotations


class FracIterError(Exception):
    """Base class for all library errors."""


class NonzeroConstantTerm(FracIterError, ValueError):
    """A Bell matrix was requested for a series with g0 != 0."""


class NonInvertible(FracIterError, ValueError):
    """The series (or its matrix) has g1 = 0 and cannot be inverted."""


class ZeroEigenvalue(NonInvertible):
    """A fractional or negative power was requested of a matrix with a zero eigenvalue."""


class DegenerateSpectrum(FracIterError, ValueError):
    """Two eigenvalues coincide within tolerance; the projector form does not apply."""

    def __init__(self, message: str, pair: tuple[complex, complex] | None = None):
        super().__init__(message)
        self.pair = pair


class IterationFailure(FracIterError, ArithmeticError):
    """The eigensolver could not meet its residual contract."""


class BranchViolation(FracIterError, ValueError):
    """A scalar function is undefined (or non-finite) at some eigenvalue."""


class OrderMismatch(FracIterError, ValueError):
    """Two matrices of different truncation orders were combined."""


class BaseOutOfRange(FracIterError, ValueError):
    """Tetration base must satisfy a > 0 and a != 1."""


class UnknownSeries(FracIterError, KeyError):
    """No catalog entry of that name."""
