# src/utils/logging_config.py
"""
Logging configuration for the spin chain simulator

Log lines are JSON objects so scan metadata (steps, fidelities, control
values) stays machine readable. Console output goes to stderr; stdout is
left to CSV tables.
"""
import functools
import json
import logging
import logging.handlers
import os
import sys
import time
import traceback
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np

_RESERVED_RECORD_KEYS = frozenset(vars(logging.LogRecord("", 0, "", 0, "", (), None))) | {
    "message", "asctime", "taskName",
}

# arrays up to this size are logged element by element
MAX_LOGGED_ARRAY = 16

PERFORMANCE_LOGGER = "performance"


def _jsonable(value: Any) -> Any:
    """Plain JSON value for numpy scalars and small arrays; a short description otherwise"""
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        if value.size <= MAX_LOGGED_ARRAY and not np.iscomplexobj(value):
            return value.tolist()
        return f"ndarray(shape={value.shape}, dtype={value.dtype})"
    try:
        json.dumps(value)
        return value
    except (TypeError, ValueError):
        return str(value)


class StructuredFormatter(logging.Formatter):
    """One JSON object per log record"""

    def __init__(self, include_extra_fields: bool = True):
        super().__init__()
        self.include_extra_fields = include_extra_fields

    def format(self, record: logging.LogRecord) -> str:
        entry: Dict[str, Any] = {
            "timestamp": datetime.fromtimestamp(record.created).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "function": record.funcName,
            "line": record.lineno,
            "thread_name": record.threadName,
        }

        if record.exc_info and record.exc_info[0] is not None:
            exc_type, exc_value, exc_tb = record.exc_info
            entry["exception"] = {
                "type": exc_type.__name__,
                "message": str(exc_value),
                "traceback": traceback.format_exception(exc_type, exc_value, exc_tb),
            }

        if self.include_extra_fields:
            extra = {key: _jsonable(value) for key, value in vars(record).items()
                     if key not in _RESERVED_RECORD_KEYS}
            if extra:
                entry["extra"] = extra

        return json.dumps(entry, ensure_ascii=False, allow_nan=True)


class LoggingConfig:
    """
    Process-wide logging setup: root handlers plus a separate 'performance'
    logger for wall-time records
    """

    DEFAULT_LOG_LEVEL = logging.INFO
    DEFAULT_LOG_DIR = "logs"
    DEFAULT_LOG_FILE = "spinsim.log"
    DEFAULT_MAX_BYTES = 10 * 1024 * 1024
    DEFAULT_BACKUP_COUNT = 3

    PLAIN_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'

    @classmethod
    def _rotating_handler(cls, path: Path, level: int, formatter: logging.Formatter,
                          max_bytes: int, backup_count: int) -> logging.Handler:
        handler = logging.handlers.RotatingFileHandler(
            filename=str(path), maxBytes=max_bytes, backupCount=backup_count, encoding='utf-8'
        )
        handler.setLevel(level)
        handler.setFormatter(formatter)
        return handler

    @classmethod
    def setup_logging(cls,
                      log_level: str = "INFO",
                      log_dir: str = DEFAULT_LOG_DIR,
                      log_file: str = DEFAULT_LOG_FILE,
                      enable_console: bool = True,
                      enable_file: bool = False,
                      enable_structured: bool = True,
                      max_bytes: int = DEFAULT_MAX_BYTES,
                      backup_count: int = DEFAULT_BACKUP_COUNT) -> None:
        """
        Replace the root handlers

        The console handler writes to stderr. With enable_file, the root
        logger also rotates `<log_dir>/<log_file>` and performance records
        go to `<log_dir>/performance_<log_file>` instead of the root.
        """
        level = getattr(logging, str(log_level).upper(), cls.DEFAULT_LOG_LEVEL)
        if enable_structured:
            file_formatter: logging.Formatter = StructuredFormatter()
            console_formatter: logging.Formatter = StructuredFormatter(include_extra_fields=False)
        else:
            file_formatter = console_formatter = logging.Formatter(cls.PLAIN_FORMAT)

        root = logging.getLogger()
        root.handlers.clear()
        root.setLevel(level)

        if enable_console:
            console = logging.StreamHandler(sys.stderr)
            console.setLevel(level)
            console.setFormatter(console_formatter)
            root.addHandler(console)

        perf_logger = logging.getLogger(PERFORMANCE_LOGGER)
        perf_logger.handlers.clear()
        perf_logger.setLevel(logging.INFO)
        perf_logger.propagate = not enable_file

        if enable_file:
            log_path = Path(log_dir)
            log_path.mkdir(parents=True, exist_ok=True)
            root.addHandler(cls._rotating_handler(log_path / log_file, level, file_formatter,
                                                  max_bytes, backup_count))
            perf_logger.addHandler(cls._rotating_handler(log_path / f"performance_{log_file}",
                                                         logging.INFO, file_formatter,
                                                         max_bytes, backup_count))

        logging.getLogger(__name__).debug("Logging configured",
                                          extra={"level": logging.getLevelName(level),
                                                 "file_logging": enable_file})

    @classmethod
    def log_performance_metric(cls, metric_name: str, value: float, unit: str = "seconds",
                               component: str = "unknown",
                               additional_data: Optional[Dict[str, Any]] = None) -> None:
        """Record one measurement on the performance logger"""
        metric = {"metric_name": metric_name, "value": value, "unit": unit, "component": component}
        metric.update(additional_data or {})
        logging.getLogger(PERFORMANCE_LOGGER).info("Performance metric recorded", extra=metric)

    @classmethod
    def log_experiment_event(cls, event_type: str, event_data: Dict[str, Any],
                             component: str = "experiment") -> None:
        """
        Lifecycle event of a CLI verb: "error" logs at ERROR, "start" and
        "complete" at INFO, anything else at DEBUG
        """
        level = {"error": logging.ERROR, "start": logging.INFO,
                 "complete": logging.INFO}.get(event_type, logging.DEBUG)
        logging.getLogger(component).log(
            level, f"Experiment event: {event_type}",
            extra={"event_type": event_type, "component": component, **event_data}
        )


def _env_flag(name: str, default: str) -> bool:
    return os.getenv(name, default).lower() == "true"


def setup_logging(config_dict: Optional[Dict[str, Any]] = None) -> None:
    """
    Configure logging from LOG_LEVEL, LOG_DIR, STRUCTURED_LOGGING,
    CONSOLE_LOGGING and FILE_LOGGING; keys in config_dict win
    """
    settings = {
        "log_level": os.getenv("LOG_LEVEL", "INFO"),
        "log_dir": os.getenv("LOG_DIR", LoggingConfig.DEFAULT_LOG_DIR),
        "enable_structured": _env_flag("STRUCTURED_LOGGING", "true"),
        "enable_console": _env_flag("CONSOLE_LOGGING", "true"),
        "enable_file": _env_flag("FILE_LOGGING", "false"),
    }
    settings.update(config_dict or {})
    LoggingConfig.setup_logging(**settings)


def log_performance(metric_name: str = None, component: str = None):
    """
    Decorator recording the wall time of each call as
    `<metric_name or function name>_execution_time`, failures included
    """
    def decorator(func):
        name = f"{metric_name or func.__name__}_execution_time"

        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            started = time.perf_counter()
            outcome: Dict[str, Any] = {"function": func.__name__, "success": True}
            try:
                return func(*args, **kwargs)
            except Exception as e:
                outcome.update(success=False, error=str(e))
                raise
            finally:
                LoggingConfig.log_performance_metric(
                    metric_name=name, value=time.perf_counter() - started,
                    component=component or func.__module__, additional_data=outcome,
                )

        return wrapper
    return decorator
