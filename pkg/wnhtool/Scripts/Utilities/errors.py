# -*- coding: utf-8 -*-
"""
Exceptions raised by the WNHtool numerical modules and the exit code each one
maps to when it escapes a command.
"""

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


class WNHError(Exception):
    """Base class of every error raised by WNHtool."""

    exit_code = EXIT_NUMERICAL


class InputError(WNHError, ValueError):
    """Invalid parameters: bad ranges, shapes, unnormalizable atoms..."""

    exit_code = EXIT_USAGE


class DomainError(WNHError, ValueError):
    """A point outside the domain of the operation (e.g. a real resolvent argument)."""


class NumericalError(WNHError, ArithmeticError):
    """An iteration or a decomposition did not converge.

    :param details: free-form diagnostics (iterates, condition numbers, seeds)
    :type details: dict
    """

    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = details or {}


class DegenerateComparisonError(WNHError):
    """Nothing left to compare: no bin above the theory floor or an empty estimate."""


class UnsupportedError(WNHError, NotImplementedError):
    exit_code = EXIT_USAGE


class NegativeDensityError(WNHError):
    """A denominator density is not positive inside the support of the target."""

    def __init__(self, message, points=None):
        super().__init__(message)
        self.points = points if points is not None else []


def exit_code_for(exc):
    """Map any exception to the CLI exit code contract."""
    if isinstance(exc, WNHError):
        return exc.exit_code
    if isinstance(exc, OSError):
        return EXIT_IO
    return EXIT_NUMERICAL
