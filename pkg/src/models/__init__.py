# src/models/__init__.py
"""
Data models for the spin chain simulator
"""

from .data_models import (
    ControlKnob, ScheduleShape, EvolutionMode, DecoherenceGranularity, PhaseLabel,
    PulseElementKind, HamiltonianParams, Schedule, DecoherenceParams, GroundStateReport,
    ScanPoint, PhasePoint, WitnessOperator, CorrelationReport, StepRecord, ScanTrace,
    NmrSystem, PulseElement, PulsePlan, RunSummary,
)

__all__ = [
    'ControlKnob', 'ScheduleShape', 'EvolutionMode', 'DecoherenceGranularity', 'PhaseLabel',
    'PulseElementKind', 'HamiltonianParams', 'Schedule', 'DecoherenceParams',
    'GroundStateReport', 'ScanPoint', 'PhasePoint', 'WitnessOperator', 'CorrelationReport',
    'StepRecord', 'ScanTrace', 'NmrSystem', 'PulseElement', 'PulsePlan', 'RunSummary',
]
