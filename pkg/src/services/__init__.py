# src/services/__init__.py
"""
Experiment orchestration and result output
"""

from .csv_writer import CsvWriter
from .experiment_service import ExperimentService

__all__ = ['CsvWriter', 'ExperimentService']
