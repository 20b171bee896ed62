# src/config/experiment_config.py
"""
Experiment configuration with named cases, flat config files and environment overrides
"""
import logging
import math
import os
from dataclasses import dataclass, asdict, fields, replace
from pathlib import Path
from typing import Any, Dict, Literal, Optional

from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from src.config.settings import (
    DEFAULT_DEGENERACY_TOL, DEFAULT_GHZ_THRESHOLD, DEFAULT_PRODUCT_TOL,
)
from src.models.data_models import (
    ControlKnob, DecoherenceGranularity, DecoherenceParams, EvolutionMode,
    HamiltonianParams, NmrSystem, Schedule, ScheduleShape,
)
from src.utils.error_handler import ConfigurationError, InvalidParameterError

logger = logging.getLogger(__name__)

# Parameter sets of the two published scans. Timing values are calibrated
# defaults; the Hamiltonian and scan endpoints are fixed for named cases.
CASE_PRESETS: Dict[str, Dict[str, Any]] = {
    "A": {
        "omega_z": -2.0, "omega_x": 0.09, "j2": 0.0, "j3": 0.0,
        "control": "j2", "c_start": 0.0, "c_end": 2.0,
        "total_time": 800.0, "steps": 8, "sharpness": 3.0,
        "t2_eff": 0.150, "reference_total": 0.146,
    },
    "B": {
        "omega_z": 0.0, "omega_x": 0.12, "j2": 0.0, "j3": 0.0,
        "control": "j3", "c_start": 0.0, "c_end": 2.0,
        "total_time": 20.0, "steps": 8, "sharpness": 5.0,
        "t2_eff": 0.600, "reference_total": 0.062,
    },
}

PROTECTED_KEYS = frozenset([
    "omega_z", "omega_x", "j2", "j3", "n_spins", "periodic", "control", "c_start", "c_end",
])

ENV_KEYS = {
    "SPINSIM_CASE": "case",
    "SPINSIM_M": "steps",
    "SPINSIM_T": "total_time",
    "SPINSIM_SHARPNESS": "sharpness",
    "SPINSIM_SUBSTEPS": "substeps",
    "SPINSIM_EVOLUTION": "evolution",
    "SPINSIM_DECOHERENCE": "decoherence_enabled",
    "SPINSIM_WORKERS": "workers",
    "SPINSIM_SEED": "seed",
    "SPINSIM_OUT": "out",
}


class ConfigFileSchema(BaseModel):
    """
    Flat `section.key = value` experiment file; unknown keys are rejected
    """
    model_config = ConfigDict(extra='forbid', populate_by_name=True)

    case: Optional[Literal["A", "B", "custom"]] = Field(None, alias="experiment.case")
    seed: Optional[int] = Field(None, alias="experiment.seed")
    out: Optional[str] = Field(None, alias="experiment.out")
    evolution: Optional[Literal["exact", "trotter"]] = Field(None, alias="experiment.evolution")
    workers: Optional[int] = Field(None, ge=1, alias="experiment.workers")

    omega_z: Optional[float] = Field(None, alias="hamiltonian.omega_z")
    omega_x: Optional[float] = Field(None, alias="hamiltonian.omega_x")
    j2: Optional[float] = Field(None, alias="hamiltonian.j2")
    j3: Optional[float] = Field(None, alias="hamiltonian.j3")
    n_spins: Optional[int] = Field(None, ge=1, alias="hamiltonian.n_spins")
    periodic: Optional[bool] = Field(None, alias="hamiltonian.periodic")

    control: Optional[Literal["j2", "j3"]] = Field(None, alias="schedule.control")
    c_start: Optional[float] = Field(None, alias="schedule.c_start")
    c_end: Optional[float] = Field(None, alias="schedule.c_end")
    total_time: Optional[float] = Field(None, gt=0, alias="schedule.T")
    steps: Optional[int] = Field(None, ge=1, alias="schedule.M")
    shape: Optional[Literal["sinh", "linear"]] = Field(None, alias="schedule.shape")
    sharpness: Optional[float] = Field(None, gt=0, alias="schedule.sharpness")
    substeps: Optional[int] = Field(None, ge=1, alias="schedule.substeps")

    decoherence_enabled: Optional[bool] = Field(None, alias="decoherence.enabled")
    t2_eff: Optional[float] = Field(None, gt=0, alias="decoherence.t2_eff")
    t1: Optional[float] = Field(None, gt=0, alias="decoherence.t1")
    reference_total: Optional[float] = Field(None, ge=0, alias="decoherence.reference_total")
    reference_steps: Optional[int] = Field(None, ge=1, alias="decoherence.reference_steps")
    granularity: Optional[Literal["segment", "substep"]] = Field(None, alias="decoherence.granularity")

    larmor_1: Optional[float] = Field(None, alias="nmr.larmor_1")
    larmor_2: Optional[float] = Field(None, alias="nmr.larmor_2")
    larmor_3: Optional[float] = Field(None, alias="nmr.larmor_3")
    j12: Optional[float] = Field(None, alias="nmr.j12")
    j13: Optional[float] = Field(None, alias="nmr.j13")
    j23: Optional[float] = Field(None, alias="nmr.j23")

    degeneracy_tol: Optional[float] = Field(None, gt=0, alias="classify.degeneracy_tol")
    ghz_threshold: Optional[float] = Field(None, gt=0, alias="classify.ghz_threshold")
    product_tol: Optional[float] = Field(None, gt=0, alias="classify.product_tol")

    def overrides(self) -> Dict[str, Any]:
        """Keys that were present in the file, by ExperimentConfig field name"""
        return {key: value for key, value in self.model_dump().items() if value is not None}


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Everything one CLI run needs: model, scan, noise, NMR register and output
    """
    case: str = "A"

    # Hamiltonian
    omega_z: float = -2.0
    omega_x: float = 0.09
    j2: float = 0.0
    j3: float = 0.0
    n_spins: int = 3
    periodic: bool = True

    # Schedule
    control: str = "j2"
    c_start: float = 0.0
    c_end: float = 2.0
    total_time: float = 800.0
    steps: int = 8
    shape: str = "sinh"
    sharpness: float = 3.0
    substeps: int = 1

    # Decoherence (seconds)
    decoherence_enabled: bool = True
    t2_eff: float = 0.150
    t1: float = math.inf
    reference_total: float = 0.146
    reference_steps: int = 8
    granularity: str = "segment"

    # NMR register; synthetic round numbers, not measured values
    larmor_1: float = 0.0
    larmor_2: float = 0.0
    larmor_3: float = 0.0
    j12: float = 100.0
    j13: float = 50.0
    j23: float = 75.0

    # Classification
    degeneracy_tol: float = DEFAULT_DEGENERACY_TOL
    ghz_threshold: float = DEFAULT_GHZ_THRESHOLD
    product_tol: float = DEFAULT_PRODUCT_TOL

    # Run
    evolution: str = "exact"
    seed: int = 0
    out: str = ""
    workers: int = 4

    @classmethod
    def for_case(cls, name: str) -> 'ExperimentConfig':
        """Defaults of a named case; 'custom' starts from Case A values"""
        if name == "custom":
            return replace(cls(**CASE_PRESETS["A"]), case="custom")
        if name not in CASE_PRESETS:
            raise ConfigurationError(f"unknown case '{name}', expected A, B or custom")
        return cls(case=name, **CASE_PRESETS[name])

    @classmethod
    def from_file(cls, path: str, base: Optional['ExperimentConfig'] = None) -> 'ExperimentConfig':
        """
        Load a flat `section.key = value` file on top of `base` (or its case defaults)
        """
        file_path = Path(path)
        if not file_path.is_file():
            raise ConfigurationError(f"config file not found: {path}")

        raw = dotenv_values(file_path)
        try:
            schema = ConfigFileSchema(**raw)
        except ValidationError as e:
            raise ConfigurationError(f"invalid config file {path}: {e}") from e

        overrides = schema.overrides()
        logger.info("Loaded configuration file", extra={"path": str(file_path), "keys": sorted(overrides)})

        case = overrides.pop("case", None)
        if case is not None and (base is None or base.case != case):
            base = cls.for_case(case)
        base = base or cls.for_case("A")
        return base.with_overrides(**overrides)

    @classmethod
    def from_env(cls, base: Optional['ExperimentConfig'] = None) -> 'ExperimentConfig':
        """
        Apply SPINSIM_* environment variables on top of `base`
        """
        raw = {field_name: os.environ[env] for env, field_name in ENV_KEYS.items() if env in os.environ}
        if not raw:
            return base or cls.for_case("A")

        logger.info("Loading configuration from environment variables", extra={"keys": sorted(raw)})
        case = raw.pop("case", None)
        if case is not None and (base is None or base.case != case):
            base = cls.for_case(case)
        base = base or cls.for_case("A")

        types = {f.name: f.type for f in fields(cls)}
        converted = {}
        for key, value in raw.items():
            try:
                if types[key] in (bool, 'bool'):
                    converted[key] = value.strip().lower() in ("1", "true", "yes")
                elif types[key] in (int, 'int'):
                    converted[key] = int(value)
                elif types[key] in (float, 'float'):
                    converted[key] = float(value)
                else:
                    converted[key] = value
            except ValueError as e:
                raise ConfigurationError(f"invalid value for {key}: {value!r}") from e
        return base.with_overrides(**converted)

    def with_overrides(self, **overrides: Any) -> 'ExperimentConfig':
        """
        Copy with fields replaced; named cases refuse Hamiltonian or scan
        endpoint changes
        """
        known = {f.name for f in fields(self)}
        unknown = sorted(set(overrides) - known)
        if unknown:
            raise ConfigurationError(f"unknown configuration keys: {', '.join(unknown)}")

        if self.case in CASE_PRESETS:
            reference = asdict(ExperimentConfig.for_case(self.case))
            conflicts = sorted(
                key for key, value in overrides.items()
                if key in PROTECTED_KEYS and value != reference[key]
            )
            if conflicts:
                raise ConfigurationError(
                    f"case {self.case} fixes {', '.join(conflicts)}; use case 'custom' to change them"
                )
        return replace(self, **overrides)

    def validate(self) -> bool:
        """
        Validate the configuration settings
        """
        errors = []

        if self.case not in ("A", "B", "custom"):
            errors.append("case must be A, B or custom")
        if self.control not in ("j2", "j3"):
            errors.append("control must be j2 or j3")
        if self.shape not in ("sinh", "linear"):
            errors.append("shape must be sinh or linear")
        if self.evolution not in ("exact", "trotter"):
            errors.append("evolution must be exact or trotter")
        if self.granularity not in ("segment", "substep"):
            errors.append("granularity must be segment or substep")
        if self.steps < 1:
            errors.append("steps must be at least 1")
        if self.substeps < 1:
            errors.append("substeps must be at least 1")
        if not self.total_time > 0:
            errors.append("total_time must be positive")
        if self.shape == "sinh" and not self.sharpness > 0:
            errors.append("sharpness must be positive")
        if self.workers < 1:
            errors.append("workers must be at least 1")
        if self.decoherence_enabled:
            if not self.t2_eff > 0:
                errors.append("t2_eff must be positive")
            if self.reference_steps < 1:
                errors.append("reference_steps must be at least 1")
            if math.isfinite(self.t1) and self.t2_eff > 2 * self.t1:
                errors.append("t2_eff must not exceed 2*t1")
        if not (0.0 < self.ghz_threshold < 1.0):
            errors.append("ghz_threshold must be between 0.0 and 1.0")

        try:
            self.hamiltonian_params()
        except InvalidParameterError as e:
            errors.append(str(e))

        if errors:
            for error in errors:
                logger.error(f"Configuration error: {error}")
            return False

        logger.info("Configuration validation successful")
        return True

    def hamiltonian_params(self) -> HamiltonianParams:
        return HamiltonianParams(omega_z=self.omega_z, omega_x=self.omega_x, j2=self.j2,
                                 j3=self.j3, n_spins=self.n_spins, periodic=self.periodic)

    def schedule(self) -> Schedule:
        return Schedule(control=ControlKnob(self.control), c_start=self.c_start, c_end=self.c_end,
                        total_time=self.total_time, steps=self.steps,
                        shape=ScheduleShape(self.shape), sharpness=self.sharpness,
                        substeps=self.substeps)

    def decoherence_params(self) -> Optional[DecoherenceParams]:
        if not self.decoherence_enabled:
            return None
        return DecoherenceParams.from_reference(
            t2_eff=self.t2_eff, reference_total=self.reference_total,
            reference_steps=self.reference_steps, t1=self.t1,
            granularity=DecoherenceGranularity(self.granularity))

    def nmr_system(self) -> NmrSystem:
        return NmrSystem(larmor=(self.larmor_1, self.larmor_2, self.larmor_3),
                         j12=self.j12, j13=self.j13, j23=self.j23)

    def evolution_mode(self) -> EvolutionMode:
        return EvolutionMode(self.evolution)

    def to_dict(self) -> Dict[str, Any]:
        """
        Convert configuration to dictionary
        """
        data = asdict(self)
        data["t1"] = None if math.isinf(self.t1) else self.t1
        return data
