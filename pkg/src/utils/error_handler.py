# src/utils/error_handler.py
"""
Error types and centralized error recording for the spin chain simulator
Provides domain exceptions, error classification and a recording decorator
"""
import logging
import traceback
import threading
from datetime import datetime, timedelta
from typing import Dict, List, Optional, Callable, Any
from dataclasses import dataclass, field
from enum import Enum
from functools import wraps

logger = logging.getLogger(__name__)


class SimulationError(Exception):
    """Base class for all simulator errors"""


class InvalidParameterError(SimulationError, ValueError):
    """Raised for out-of-range parameters, bad dimensions or non-Hermitian input"""


class DegenerateStateError(SimulationError):
    """Raised when an operation needs a nondegenerate ground state"""


class ConfigurationError(SimulationError):
    """Raised for unreadable, invalid or conflicting experiment configuration"""


class PlanCompilationError(SimulationError, ValueError):
    """Raised when a pulse plan cannot be compiled or simulated"""


class OutputError(SimulationError):
    """Raised when a result file cannot be written"""


class ErrorSeverity(Enum):
    """Error severity levels"""
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"
    CRITICAL = "critical"


class ErrorCategory(Enum):
    """Error categories for classification"""
    VALIDATION_ERROR = "validation_error"
    CONFIGURATION_ERROR = "configuration_error"
    NUMERICAL_ERROR = "numerical_error"
    DEGENERACY_ERROR = "degeneracy_error"
    COMPILATION_ERROR = "compilation_error"
    IO_ERROR = "io_error"
    SYSTEM_ERROR = "system_error"
    UNKNOWN_ERROR = "unknown_error"


@dataclass
class ErrorContext:
    """Context information for error handling"""
    component: str
    operation: str
    metadata: Dict[str, Any] = field(default_factory=dict)


@dataclass
class ErrorRecord:
    """Record of an error occurrence"""
    timestamp: datetime
    error_type: str
    error_message: str
    severity: ErrorSeverity
    category: ErrorCategory
    context: ErrorContext
    traceback: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary representation"""
        return {
            'timestamp': self.timestamp.isoformat(),
            'error_type': self.error_type,
            'error_message': self.error_message,
            'severity': self.severity.value,
            'category': self.category.value,
            'component': self.context.component,
            'operation': self.context.operation,
        }


class ErrorHandler:
    """
    Thread-safe error recorder with type- and message-based classification
    """

    # Checked in order; the first matching base class wins
    TYPE_CATEGORIES = [
        (ConfigurationError, ErrorCategory.CONFIGURATION_ERROR),
        (DegenerateStateError, ErrorCategory.DEGENERACY_ERROR),
        (PlanCompilationError, ErrorCategory.COMPILATION_ERROR),
        (OutputError, ErrorCategory.IO_ERROR),
        (InvalidParameterError, ErrorCategory.VALIDATION_ERROR),
        (FloatingPointError, ErrorCategory.NUMERICAL_ERROR),
        (OSError, ErrorCategory.IO_ERROR),
        (MemoryError, ErrorCategory.SYSTEM_ERROR),
    ]

    def __init__(self, max_records: int = 500):
        self.error_records: List[ErrorRecord] = []
        self.max_records = max_records
        self.lock = threading.RLock()
        self.error_patterns: Dict[str, ErrorCategory] = {
            'config': ErrorCategory.CONFIGURATION_ERROR,
            'setting': ErrorCategory.CONFIGURATION_ERROR,
            'invalid': ErrorCategory.VALIDATION_ERROR,
            'must be': ErrorCategory.VALIDATION_ERROR,
            'hermitian': ErrorCategory.VALIDATION_ERROR,
            'dimension': ErrorCategory.VALIDATION_ERROR,
            'degenerate': ErrorCategory.DEGENERACY_ERROR,
            'singular': ErrorCategory.NUMERICAL_ERROR,
            'converge': ErrorCategory.NUMERICAL_ERROR,
            'linalg': ErrorCategory.NUMERICAL_ERROR,
            'permission': ErrorCategory.IO_ERROR,
            'no such file': ErrorCategory.IO_ERROR,
        }

    def handle_error(self, error: Exception, context: ErrorContext) -> ErrorRecord:
        """
        Classify, log and store an error

        Args:
            error: The exception that occurred
            context: Context information about the error

        Returns:
            The stored ErrorRecord
        """
        with self.lock:
            category = self._classify_error(error)
            severity = self._determine_severity(error, category)

            error_record = ErrorRecord(
                timestamp=datetime.now(),
                error_type=type(error).__name__,
                error_message=str(error),
                severity=severity,
                category=category,
                context=context,
                traceback=traceback.format_exc()
            )

            self._log_error(error_record)

            self.error_records.append(error_record)
            if len(self.error_records) > self.max_records:
                self.error_records = self.error_records[-self.max_records:]

            return error_record

    def _classify_error(self, error: Exception) -> ErrorCategory:
        """Classify error into a category"""
        for error_type, category in self.TYPE_CATEGORIES:
            if isinstance(error, error_type):
                return category

        error_str = str(error).lower()
        error_type_name = type(error).__name__.lower()
        for pattern, category in self.error_patterns.items():
            if pattern in error_str or pattern in error_type_name:
                return category

        return ErrorCategory.UNKNOWN_ERROR

    def _determine_severity(self, error: Exception, category: ErrorCategory) -> ErrorSeverity:
        """Determine error severity"""
        if isinstance(error, (SystemExit, KeyboardInterrupt, MemoryError)):
            return ErrorSeverity.CRITICAL

        if category in [ErrorCategory.SYSTEM_ERROR, ErrorCategory.IO_ERROR,
                        ErrorCategory.NUMERICAL_ERROR]:
            return ErrorSeverity.HIGH

        if category in [ErrorCategory.CONFIGURATION_ERROR, ErrorCategory.DEGENERACY_ERROR,
                        ErrorCategory.COMPILATION_ERROR, ErrorCategory.UNKNOWN_ERROR]:
            return ErrorSeverity.MEDIUM

        return ErrorSeverity.LOW

    def _log_error(self, error_record: ErrorRecord):
        """Log error with appropriate level"""
        log_data = {
            'error_type': error_record.error_type,
            'error_message': error_record.error_message,
            'severity': error_record.severity.value,
            'category': error_record.category.value,
            'component': error_record.context.component,
            'operation': error_record.context.operation,
            'metadata': error_record.context.metadata
        }

        if error_record.severity == ErrorSeverity.CRITICAL:
            logger.critical(f"CRITICAL ERROR: {error_record.error_message}", extra=log_data)
        elif error_record.severity == ErrorSeverity.HIGH:
            logger.error(f"HIGH SEVERITY ERROR: {error_record.error_message}", extra=log_data)
        elif error_record.severity == ErrorSeverity.MEDIUM:
            logger.warning(f"MEDIUM SEVERITY ERROR: {error_record.error_message}", extra=log_data)
        else:
            logger.info(f"LOW SEVERITY ERROR: {error_record.error_message}", extra=log_data)

    def get_error_stats(self) -> Dict[str, Any]:
        """Get error statistics"""
        with self.lock:
            by_severity: Dict[str, int] = {}
            by_category: Dict[str, int] = {}
            by_component: Dict[str, int] = {}
            for record in self.error_records:
                by_severity[record.severity.value] = by_severity.get(record.severity.value, 0) + 1
                by_category[record.category.value] = by_category.get(record.category.value, 0) + 1
                component = record.context.component
                by_component[component] = by_component.get(component, 0) + 1

            return {
                'total_errors': len(self.error_records),
                'by_severity': by_severity,
                'by_category': by_category,
                'by_component': by_component,
                'recent_errors': [r.to_dict() for r in self.error_records[-10:]]
            }

    def get_error_summary(self, hours: int = 24) -> Dict[str, Any]:
        """Summarize errors recorded within the last `hours`"""
        with self.lock:
            cutoff_time = datetime.now() - timedelta(hours=hours)
            recent = [r for r in self.error_records if r.timestamp >= cutoff_time]
            return {
                'period_hours': hours,
                'total_errors': len(recent),
                'categories': sorted({r.category.value for r in recent}),
                'last_error': recent[-1].to_dict() if recent else None
            }

    def clear(self):
        """Drop all stored records"""
        with self.lock:
            self.error_records = []


# Global error handler instance
_error_handler = ErrorHandler()


def get_error_handler() -> ErrorHandler:
    """Get the global error handler"""
    return _error_handler


def handle_errors(component: str, operation: str = None, reraise: bool = True, **metadata):
    """
    Decorator that records any exception raised by the wrapped function

    Args:
        component: Component name for error context
        operation: Operation name (defaults to function name)
        reraise: Re-raise after recording (otherwise return None)
        **metadata: Additional metadata for error context
    """
    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(*args, **kwargs):
            try:
                return func(*args, **kwargs)
            except Exception as e:
                context = ErrorContext(
                    component=component,
                    operation=operation or func.__name__,
                    metadata=metadata
                )
                get_error_handler().handle_error(e, context)
                if reraise:
                    raise
                return None

        return wrapper
    return decorator
