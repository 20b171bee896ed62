# tests/test_logging_config.py
"""
Unit tests for logging configuration and structured logging functionality
"""
import json
import logging
import os
import shutil
import sys
import tempfile
import unittest
from pathlib import Path
from unittest.mock import patch

import numpy as np

from src.utils.logging_config import (
    StructuredFormatter, LoggingConfig, setup_logging, log_performance
)


def _read_json_lines(path):
    with open(path, 'r') as f:
        return [json.loads(line) for line in f.read().strip().split('\n') if line.strip()]


class TestStructuredFormatter(unittest.TestCase):
    """Test cases for StructuredFormatter"""

    def setUp(self):
        """Set up test fixtures"""
        self.formatter = StructuredFormatter()
        self.formatter_no_extra = StructuredFormatter(include_extra_fields=False)

    def _record(self, msg="Scan finished", exc_info=None):
        return logging.LogRecord(name="spinsim.test", level=logging.INFO, pathname="/test/engine.py",
                                 lineno=42, msg=msg, args=(), exc_info=exc_info)

    def test_format_basic_record(self):
        """Test formatting a basic log record"""
        log_data = json.loads(self.formatter.format(self._record()))

        self.assertEqual(log_data["level"], "INFO")
        self.assertEqual(log_data["logger"], "spinsim.test")
        self.assertEqual(log_data["message"], "Scan finished")
        self.assertEqual(log_data["line"], 42)
        self.assertIn("timestamp", log_data)

    def test_format_with_exception(self):
        """Test formatting a record that carries an exception"""
        try:
            raise ValueError("bad schedule")
        except ValueError:
            record = self._record("failed", exc_info=sys.exc_info())

        log_data = json.loads(self.formatter.format(record))
        self.assertEqual(log_data["exception"]["type"], "ValueError")
        self.assertEqual(log_data["exception"]["message"], "bad schedule")

    def test_format_with_extra_fields(self):
        """Test scan metadata lands under 'extra'"""
        record = self._record()
        record.steps = 8
        record.min_fidelity = 0.99
        log_data = json.loads(self.formatter.format(record))
        self.assertEqual(log_data["extra"]["steps"], 8)
        self.assertEqual(log_data["extra"]["min_fidelity"], 0.99)

    def test_format_without_extra_fields(self):
        record = self._record()
        record.steps = 8
        log_data = json.loads(self.formatter_no_extra.format(record))
        self.assertNotIn("extra", log_data)

    def test_format_numpy_extras(self):
        """Test numpy scalars and small arrays log as plain JSON values"""
        record = self._record()
        record.fidelity = np.float64(0.25)
        record.controls = np.array([0.0, 1.0])
        log_data = json.loads(self.formatter.format(record))
        self.assertEqual(log_data["extra"]["fidelity"], 0.25)
        self.assertEqual(log_data["extra"]["controls"], [0.0, 1.0])

    def test_format_large_array_is_described(self):
        """Test density matrices are summarized instead of dumped"""
        record = self._record()
        record.state = np.eye(8, dtype=complex)
        log_data = json.loads(self.formatter.format(record))
        self.assertEqual(log_data["extra"]["state"], "ndarray(shape=(8, 8), dtype=complex128)")

    def test_format_with_non_serializable_extra(self):
        """Test other objects are stringified instead of breaking the line"""
        record = self._record()
        record.path = Path("/tmp/scan.csv")
        log_data = json.loads(self.formatter.format(record))
        self.assertEqual(log_data["extra"]["path"], "/tmp/scan.csv")


class TestLoggingConfig(unittest.TestCase):
    """Test cases for LoggingConfig"""

    def setUp(self):
        """Set up test fixtures"""
        self.temp_dir = tempfile.mkdtemp()
        self.log_dir = os.path.join(self.temp_dir, "logs")

    def tearDown(self):
        """Clean up test fixtures"""
        logging.getLogger().handlers.clear()
        logging.getLogger('performance').handlers.clear()
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def test_setup_logging_basic(self):
        """Test basic logging setup"""
        LoggingConfig.setup_logging(log_level="INFO", log_dir=self.log_dir,
                                    enable_console=True, enable_file=True)

        self.assertTrue(os.path.exists(self.log_dir))
        root_logger = logging.getLogger()
        self.assertEqual(root_logger.level, logging.INFO)
        self.assertEqual(len(root_logger.handlers), 2)

    def test_console_goes_to_stderr(self):
        """Test console output leaves stdout free for CSV data"""
        LoggingConfig.setup_logging(log_level="INFO", enable_console=True, enable_file=False)
        handler = logging.getLogger().handlers[0]
        self.assertIs(handler.stream, sys.stderr)
        self.assertFalse(os.path.exists(self.log_dir))

    def test_setup_logging_structured(self):
        """Test structured logging to file"""
        LoggingConfig.setup_logging(log_level="INFO", log_dir=self.log_dir,
                                    enable_console=False, enable_structured=True, enable_file=True)

        logging.getLogger("test").info("Test message", extra={"case": "B"})

        lines = _read_json_lines(os.path.join(self.log_dir, "spinsim.log"))
        entry = next(line for line in lines if line.get("message") == "Test message")
        self.assertEqual(entry["extra"]["case"], "B")

    def test_log_performance_metric(self):
        """Test performance metric logging"""
        LoggingConfig.setup_logging(log_dir=self.log_dir, enable_console=False, enable_file=True)

        LoggingConfig.log_performance_metric(metric_name="scan_time", value=1.23,
                                             component="adiabatic_engine",
                                             additional_data={"steps": 64})

        log_data = _read_json_lines(os.path.join(self.log_dir, "performance_spinsim.log"))[0]
        self.assertEqual(log_data["extra"]["metric_name"], "scan_time")
        self.assertEqual(log_data["extra"]["value"], 1.23)
        self.assertEqual(log_data["extra"]["unit"], "seconds")
        self.assertEqual(log_data["extra"]["component"], "adiabatic_engine")
        self.assertEqual(log_data["extra"]["steps"], 64)

    def test_log_experiment_event(self):
        """Test experiment lifecycle event logging"""
        LoggingConfig.setup_logging(log_dir=self.log_dir, enable_console=False, enable_file=True)

        LoggingConfig.log_experiment_event(event_type="start",
                                           event_data={"verb": "msweep", "case": "B"},
                                           component="spinsim")

        lines = _read_json_lines(os.path.join(self.log_dir, "spinsim.log"))
        entry = next(line for line in lines if line.get("extra", {}).get("event_type") == "start")
        self.assertEqual(entry["extra"]["verb"], "msweep")
        self.assertEqual(entry["level"], "INFO")

    def test_error_event_level(self):
        LoggingConfig.setup_logging(log_dir=self.log_dir, enable_console=False, enable_file=True)
        LoggingConfig.log_experiment_event("error", {"error": "boom"}, component="spinsim")
        lines = _read_json_lines(os.path.join(self.log_dir, "spinsim.log"))
        entry = next(line for line in lines if line.get("extra", {}).get("event_type") == "error")
        self.assertEqual(entry["level"], "ERROR")

    def test_log_rotation(self):
        """Test log file rotation"""
        LoggingConfig.setup_logging(log_dir=self.log_dir, enable_console=False, enable_file=True,
                                    max_bytes=100, backup_count=2)

        logger = logging.getLogger("test")
        for i in range(50):
            logger.info(f"Step {i} finished with some additional content to make it longer")

        log_files = list(Path(self.log_dir).glob("*.log*"))
        self.assertGreater(len(log_files), 1)


class TestSetupLoggingFunction(unittest.TestCase):
    """Test cases for setup_logging convenience function"""

    def tearDown(self):
        logging.getLogger().handlers.clear()

    @patch.dict(os.environ, {
        'LOG_LEVEL': 'DEBUG',
        'LOG_DIR': 'test_logs',
        'STRUCTURED_LOGGING': 'false',
        'FILE_LOGGING': 'true'
    })
    def test_setup_logging_with_env_vars(self):
        """Test setup_logging with environment variables"""
        with patch.object(LoggingConfig, 'setup_logging') as mock_setup:
            setup_logging()

            mock_setup.assert_called_once()
            call_args = mock_setup.call_args[1]
            self.assertEqual(call_args['log_level'], 'DEBUG')
            self.assertEqual(call_args['log_dir'], 'test_logs')
            self.assertFalse(call_args['enable_structured'])
            self.assertTrue(call_args['enable_file'])

    def test_setup_logging_with_config_dict(self):
        """Test the CLI --log-level dictionary wins over the environment"""
        with patch.object(LoggingConfig, 'setup_logging') as mock_setup:
            setup_logging({'log_level': 'WARNING', 'enable_console': False})

            call_args = mock_setup.call_args[1]
            self.assertEqual(call_args['log_level'], 'WARNING')
            self.assertFalse(call_args['enable_console'])


class TestLogPerformanceDecorator(unittest.TestCase):
    """Test cases for log_performance decorator"""

    def setUp(self):
        """Set up test fixtures"""
        self.temp_dir = tempfile.mkdtemp()
        LoggingConfig.setup_logging(log_dir=self.temp_dir, enable_console=False, enable_file=True)
        self.perf_log_file = os.path.join(self.temp_dir, "performance_spinsim.log")

    def tearDown(self):
        """Clean up test fixtures"""
        logging.getLogger().handlers.clear()
        logging.getLogger('performance').handlers.clear()
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def test_decorator_success(self):
        """Test performance decorator on successful function"""
        @log_performance(metric_name="phase_grid", component="ground_state")
        def add(x, y):
            return x + y

        self.assertEqual(add(2, 3), 5)

        log_data = _read_json_lines(self.perf_log_file)[0]
        self.assertEqual(log_data["extra"]["metric_name"], "phase_grid_execution_time")
        self.assertEqual(log_data["extra"]["component"], "ground_state")
        self.assertTrue(log_data["extra"]["success"])
        self.assertGreaterEqual(log_data["extra"]["value"], 0)

    def test_decorator_exception(self):
        """Test performance decorator on function that raises exception"""
        @log_performance(metric_name="failing_scan", component="adiabatic_engine")
        def failing_scan():
            raise ValueError("Test error")

        with self.assertRaises(ValueError):
            failing_scan()

        log_data = _read_json_lines(self.perf_log_file)[0]
        self.assertEqual(log_data["extra"]["metric_name"], "failing_scan_execution_time")
        self.assertFalse(log_data["extra"]["success"])
        self.assertEqual(log_data["extra"]["error"], "Test error")

    def test_decorator_default_names(self):
        """Test performance decorator with default metric and component names"""
        @log_performance()
        def my_scan():
            return "success"

        self.assertEqual(my_scan(), "success")

        log_data = _read_json_lines(self.perf_log_file)[0]
        self.assertEqual(log_data["extra"]["metric_name"], "my_scan_execution_time")
        self.assertEqual(log_data["extra"]["function"], "my_scan")


if __name__ == '__main__':
    unittest.main()
