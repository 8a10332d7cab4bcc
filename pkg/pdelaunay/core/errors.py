"""Error codes, exceptions and exit-code normalization for pdelaunay."""
from enum import Enum, IntEnum
from typing import Any, Dict, Optional


class ErrorCode(str, Enum):
    """Normalized error codes for pdelaunay.

    All error codes must be one of these values.
    Used in exceptions, structured logs, metrics and CLI diagnostics.
    """
    # Parameter / usage errors
    PARAMETER_OUT_OF_RANGE = "PARAMETER_OUT_OF_RANGE"
    USAGE_ERROR = "USAGE_ERROR"
    CONFIG_ERROR = "CONFIG_ERROR"

    # Mathematical signals raised by operations
    INDEFINITE_FORM = "INDEFINITE_FORM"
    NOT_TWO_VALUED = "NOT_TWO_VALUED"
    NOT_PROPORTIONAL = "NOT_PROPORTIONAL"
    DEGENERATE_LINE = "DEGENERATE_LINE"
    NOT_IN_LATTICE = "NOT_IN_LATTICE"

    # Resource errors
    BUDGET_EXCEEDED = "BUDGET_EXCEEDED"

    # Internal errors
    INTERNAL_ERROR = "INTERNAL_ERROR"

    @classmethod
    def normalize(cls, code: Optional[str]) -> Optional[str]:
        """Normalize error code string to enum value.

        Returns None if code is None; unknown codes map to INTERNAL_ERROR.
        """
        if not code:
            return None
        try:
            return cls(code).value
        except ValueError:
            return cls.INTERNAL_ERROR.value


class ExitCode(IntEnum):
    """Process exit codes of the command-line front end.

    0 = certified, 1 = mathematically refuted / failed certificate,
    2 = usage or resource error.
    """
    CERTIFIED = 0
    REFUTED = 1
    USAGE = 2

    @classmethod
    def from_error_code(cls, code: Optional[ErrorCode]) -> "ExitCode":
        """Map an error code raised during a command to an exit code."""
        if code is None:
            return cls.CERTIFIED
        if code in (ErrorCode.DEGENERATE_LINE, ErrorCode.INDEFINITE_FORM):
            # Raised while building a certificate: the instance is refuted.
            return cls.REFUTED
        return cls.USAGE


class PerfectDelaunayError(Exception):
    """Base class for all pdelaunay errors."""

    code: ErrorCode = ErrorCode.INTERNAL_ERROR

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details: Dict[str, Any] = details

    def to_dict(self) -> Dict[str, Any]:
        """Error payload for logs and JSON diagnostics."""
        payload: Dict[str, Any] = {"error_code": self.code.value, "message": self.message}
        if self.details:
            payload["details"] = {k: str(v) for k, v in self.details.items()}
        return payload


class UsageError(PerfectDelaunayError):
    """Malformed input to an operation (shape mismatch, empty input, ...)."""

    code = ErrorCode.USAGE_ERROR


class ParameterOutOfRange(UsageError):
    """(d, s, k) outside the admissible range of an operation."""

    code = ErrorCode.PARAMETER_OUT_OF_RANGE


class ConfigError(UsageError):
    """Configuration file or environment could not be loaded."""

    code = ErrorCode.CONFIG_ERROR


class NotInLatticeError(UsageError):
    """A point was expected to lie in a lattice but does not."""

    code = ErrorCode.NOT_IN_LATTICE


class IndefiniteFormError(PerfectDelaunayError):
    """A symmetric matrix has a negative pivot (or an unsupported zero pivot)."""

    code = ErrorCode.INDEFINITE_FORM


class NotTwoValuedError(PerfectDelaunayError):
    """Integer parts of a lattice point do not take two consecutive values."""

    code = ErrorCode.NOT_TWO_VALUED


class NotProportionalError(PerfectDelaunayError):
    """Two quadratic functions are not scalar multiples of each other."""

    code = ErrorCode.NOT_PROPORTIONAL


class DegenerateLineError(PerfectDelaunayError):
    """The two diagram targets do not determine a unique line."""

    code = ErrorCode.DEGENERATE_LINE


class BudgetExceededError(PerfectDelaunayError):
    """Lattice enumeration would exceed the configured node budget."""

    code = ErrorCode.BUDGET_EXCEEDED
