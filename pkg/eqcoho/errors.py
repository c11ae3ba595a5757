"""Exception hierarchy shared by every eqcoho module, with CLI exit codes."""
from __future__ import annotations

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INTERNAL = 3


class EqcohoError(Exception):
    exit_code = EXIT_USAGE


class ArgumentError(EqcohoError, ValueError):
    """Bad arguments: m does not divide n, n < 3, mixed (n, p) summands."""


class DimensionError(ArgumentError):
    """Row-count or modulus mismatch between matrices."""


class ShapeError(ArgumentError):
    """A square matrix was required."""


class DomainError(EqcohoError, ValueError):
    """The hypothesis of a proposition does not hold for the given input."""


class SymmetryError(DomainError):
    """A vertex permutation does not preserve the simplicial complex."""


class SizeGuardError(DomainError):
    """Input exceeds the configured size guard."""


class InternalAssertionError(EqcohoError, AssertionError):
    """A theorem-level identity failed. Never expected in a correct run."""

    exit_code = EXIT_INTERNAL


def ensure(condition: bool, message: str) -> None:
    """Raise InternalAssertionError unless condition holds (survives python -O)."""
    if not condition:
        raise InternalAssertionError(message)
