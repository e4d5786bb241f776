"""
Exceptions for the zerolab package.

Every error raised on purpose by zerolab derives from ZerolabError, so the
command-line runner can map the whole hierarchy onto exit codes.
"""

from typing import Any, Dict, Optional


class ZerolabError(Exception):
    """Base class for zerolab errors."""


class InvalidInputError(ZerolabError, ValueError):
    """Rejected input: bad label, out-of-range parameter, mismatched tables."""


class HorizonError(InvalidInputError):
    """
    Prime horizon of a representation is too small for a test function.

    Attributes:
        required_horizon: Smallest horizon that would have been accepted
    """

    def __init__(self, message: str, required_horizon: int):
        super().__init__(f"{message} (required horizon: {required_horizon})")
        self.required_horizon = required_horizon


class ParseError(InvalidInputError):
    """
    Malformed data file.

    Attributes:
        path: File being parsed
        line_number: 1-based line of the offending entry
    """

    def __init__(self, path: str, line_number: int, message: str):
        super().__init__(f"{path}:{line_number}: {message}")
        self.path = path
        self.line_number = line_number


class ResourceLimitError(ZerolabError):
    """A computation would exceed a configured memory budget."""


class NumericalError(ZerolabError, ArithmeticError):
    """
    Numerical failure, e.g. a sampled matrix that is not unitary enough.

    Attributes:
        diagnostics: Values describing the failure
    """

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class SingularityError(NumericalError):
    """Evaluation at a pole of a local L-factor."""
