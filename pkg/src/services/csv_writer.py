# src/services/csv_writer.py
"""
Single serialized writer for result tables

Every table starts with a `#schema=<name>/v<version>:<columns>` comment line so
column order is fixed and versioned.
"""
import csv
import io
import json
import logging
import math
import sys
import threading
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, TextIO

from src.config.settings import CSV_SCHEMA_VERSION
from src.utils.error_handler import OutputError

logger = logging.getLogger(__name__)

SCAN_COLUMNS = ['m', 't', 'control', 'fidelity', 'purity', 'C_xx', 'witness_W', 'witness_GHZ', 'energy']
MSWEEP_COLUMNS = ['M', 'min_fidelity_ideal', 'min_fidelity_noisy']
PHASE_COLUMNS = ['j2', 'j3', 'energy', 'gap', 'degeneracy', 'tangle', 'label']
PULSE_COLUMNS = ['index', 'kind', 'spins', 'axis', 'angle', 'duration', 'refocus', 'note']


def schema_line(name: str, columns: Sequence[str]) -> str:
    return f"#schema={name}/v{CSV_SCHEMA_VERSION}:{','.join(columns)}"


def _cell(value: Any) -> Any:
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    return value


class CsvWriter:
    """
    Writes tables to a path (or stdout when no path is given) one at a time
    """

    def __init__(self, path: Optional[str] = None, stream: Optional[TextIO] = None):
        self.path = Path(path) if path else None
        self.stream = stream
        self.lock = threading.Lock()
        self.rows_written = 0

    def write_table(self, name: str, columns: Sequence[str], rows: Iterable[Dict[str, Any]]) -> int:
        """
        Write header, schema line and rows; returns the number of data rows
        """
        buffer = io.StringIO()
        buffer.write(schema_line(name, columns) + "\n")
        writer = csv.DictWriter(buffer, fieldnames=list(columns), extrasaction='ignore',
                                lineterminator="\n")
        writer.writeheader()
        count = 0
        for row in rows:
            writer.writerow({key: _cell(value) for key, value in row.items()})
            count += 1

        with self.lock:
            self._emit(buffer.getvalue())
            self.rows_written += count

        logger.info("Table written", extra={"table": name, "rows": count,
                                            "path": str(self.path) if self.path else "stdout"})
        return count

    def stream_text(self, text: str) -> None:
        """Plain text to the output stream"""
        with self.lock:
            (self.stream or sys.stdout).write(text)

    def write_json(self, suffix: str, payload: Dict[str, Any]) -> Optional[Path]:
        """Write payload next to the CSV as <path><suffix>; skipped for stdout output"""
        if self.path is None:
            return None
        target = self.path.with_name(self.path.name + suffix)
        with self.lock:
            try:
                target.parent.mkdir(parents=True, exist_ok=True)
                with open(target, 'w', encoding='utf-8') as f:
                    json.dump(payload, f, indent=2, sort_keys=True, default=str)
            except OSError as e:
                raise OutputError(f"cannot write {target}: {e}") from e
        return target

    def _emit(self, text: str) -> None:
        if self.path is None:
            (self.stream or sys.stdout).write(text)
            return
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, 'w', encoding='utf-8', newline='') as f:
                f.write(text)
        except OSError as e:
            raise OutputError(f"cannot write {self.path}: {e}") from e


def read_table(path: str) -> List[Dict[str, str]]:
    """Rows of a table written by CsvWriter (schema line skipped)"""
    with open(path, encoding='utf-8') as f:
        lines = [line for line in f if not line.startswith("#")]
    return list(csv.DictReader(lines))
