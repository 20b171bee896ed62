# tests/test_basic_error_handling.py
"""
Basic tests to verify error classification and recording
"""
import pytest

from src.utils.error_handler import (
    ConfigurationError, DegenerateStateError, ErrorCategory, ErrorContext, ErrorHandler,
    ErrorSeverity, InvalidParameterError, OutputError, PlanCompilationError, SimulationError,
    get_error_handler, handle_errors,
)


def test_error_handler_basic_functionality():
    """Test basic error handler functionality"""
    error_handler = ErrorHandler()
    context = ErrorContext(component="test", operation="test_op")

    record = error_handler.handle_error(Exception("Test error"), context)

    assert record.error_message == "Test error"
    assert record.context.component == "test"
    assert record.category == ErrorCategory.UNKNOWN_ERROR

    stats = error_handler.get_error_stats()
    assert stats['total_errors'] == 1
    assert stats['by_component'] == {"test": 1}


@pytest.mark.parametrize("error, category, severity", [
    (InvalidParameterError("tau must be finite"), ErrorCategory.VALIDATION_ERROR, ErrorSeverity.LOW),
    (ConfigurationError("unknown case"), ErrorCategory.CONFIGURATION_ERROR, ErrorSeverity.MEDIUM),
    (DegenerateStateError("initial ground state is 4-fold degenerate"),
     ErrorCategory.DEGENERACY_ERROR, ErrorSeverity.MEDIUM),
    (PlanCompilationError("coupling J_12 is zero"), ErrorCategory.COMPILATION_ERROR, ErrorSeverity.MEDIUM),
    (OutputError("cannot write out.csv"), ErrorCategory.IO_ERROR, ErrorSeverity.HIGH),
    (FloatingPointError("overflow"), ErrorCategory.NUMERICAL_ERROR, ErrorSeverity.HIGH),
    (RuntimeError("eigenvalues did not converge"), ErrorCategory.NUMERICAL_ERROR, ErrorSeverity.HIGH),
])
def test_error_classification(error, category, severity):
    """Test type-based classification with message-pattern fallback"""
    record = ErrorHandler().handle_error(error, ErrorContext(component="physics", operation="op"))
    assert record.category == category
    assert record.severity == severity


def test_domain_errors_share_base():
    """Test every domain error is a SimulationError and parameter errors are ValueErrors"""
    for error_type in (InvalidParameterError, DegenerateStateError, ConfigurationError,
                       PlanCompilationError, OutputError):
        assert issubclass(error_type, SimulationError)
    assert issubclass(InvalidParameterError, ValueError)


def test_record_cap():
    error_handler = ErrorHandler(max_records=3)
    for k in range(5):
        error_handler.handle_error(ValueError(f"error {k}"), ErrorContext(component="c", operation="o"))
    assert [r.error_message for r in error_handler.error_records] == ["error 2", "error 3", "error 4"]


def test_error_summary():
    error_handler = ErrorHandler()
    error_handler.handle_error(ConfigurationError("bad file"), ErrorContext(component="cli", operation="load"))
    summary = error_handler.get_error_summary(hours=1)
    assert summary['total_errors'] == 1
    assert summary['categories'] == ["configuration_error"]
    assert summary['last_error']['operation'] == "load"


def test_handle_errors_decorator_records_and_reraises():
    @handle_errors(component="experiment_service", case="B")
    def run():
        raise DegenerateStateError("initial ground state is 2-fold degenerate")

    with pytest.raises(DegenerateStateError):
        run()

    record = get_error_handler().error_records[-1]
    assert record.context.operation == "run"
    assert record.context.metadata == {"case": "B"}


def test_handle_errors_decorator_swallow():
    @handle_errors(component="experiment_service", operation="export", reraise=False)
    def export():
        raise OutputError("cannot write")

    assert export() is None
    assert get_error_handler().get_error_stats()['by_category'] == {"io_error": 1}


def test_clear():
    error_handler = ErrorHandler()
    error_handler.handle_error(ValueError("x"), ErrorContext(component="c", operation="o"))
    error_handler.clear()
    assert error_handler.get_error_stats()['total_errors'] == 0
