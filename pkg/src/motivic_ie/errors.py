"""Exception hierarchy shared by every motivic_ie module."""

from __future__ import annotations


class MotivicIEError(Exception):
    """Base class for all motivic_ie errors."""

    exit_code = 1


class InvalidInputError(MotivicIEError, ValueError):
    """Raised when an input object or parameter is malformed."""

    exit_code = 2


class CostGuardError(MotivicIEError, RuntimeError):
    """Raised when a computation would exceed a configured cost guard."""

    exit_code = 3


class VerificationError(MotivicIEError, AssertionError):
    """Raised when an exact identity fails to hold."""

    pass
