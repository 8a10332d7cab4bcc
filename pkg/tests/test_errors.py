"""Tests for error codes and exit-code mapping."""
from pdelaunay.core.errors import (
    BudgetExceededError,
    DegenerateLineError,
    ErrorCode,
    ExitCode,
    IndefiniteFormError,
    NotInLatticeError,
    ParameterOutOfRange,
    UsageError,
)


def test_normalize():
    """Known codes pass through, unknown ones become INTERNAL_ERROR."""
    assert ErrorCode.normalize("DEGENERATE_LINE") == "DEGENERATE_LINE"
    assert ErrorCode.normalize("SOMETHING_ELSE") == "INTERNAL_ERROR"
    assert ErrorCode.normalize(None) is None


def test_exit_codes():
    """Certificate signals refute, everything else is a usage error."""
    assert ExitCode.from_error_code(None) is ExitCode.CERTIFIED
    assert ExitCode.from_error_code(ErrorCode.DEGENERATE_LINE) is ExitCode.REFUTED
    assert ExitCode.from_error_code(ErrorCode.INDEFINITE_FORM) is ExitCode.REFUTED
    assert ExitCode.from_error_code(ErrorCode.BUDGET_EXCEEDED) is ExitCode.USAGE
    assert ExitCode.from_error_code(ErrorCode.PARAMETER_OUT_OF_RANGE) is ExitCode.USAGE


def test_hierarchy():
    """Lattice and range errors are usage errors."""
    assert issubclass(ParameterOutOfRange, UsageError)
    assert issubclass(NotInLatticeError, UsageError)
    assert not issubclass(IndefiniteFormError, UsageError)
    assert DegenerateLineError("x").code is ErrorCode.DEGENERATE_LINE


def test_to_dict():
    """Details are stringified into the payload."""
    payload = BudgetExceededError("too many nodes", budget=10).to_dict()
    assert payload == {
        "error_code": "BUDGET_EXCEEDED",
        "message": "too many nodes",
        "details": {"budget": "10"},
    }
    assert "details" not in UsageError("plain").to_dict()
