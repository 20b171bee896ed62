# src/models/data_models.py
"""
Data models for the spin chain simulator
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Dict, Any, Tuple

import numpy as np

from src.config.settings import MAX_DENSE_SPINS, NORM_TOL
from src.utils.error_handler import InvalidParameterError


class ControlKnob(Enum):
    """Coupling swept by an adiabatic scan"""
    J2 = "j2"
    J3 = "j3"


class ScheduleShape(Enum):
    """Time dependence of the control parameter"""
    HYPERBOLIC_SINE = "sinh"
    LINEAR = "linear"


class EvolutionMode(Enum):
    """How each segment's unitary is built"""
    TROTTER = "trotter"
    EXACT = "exact"


class DecoherenceGranularity(Enum):
    """Where the noise channel is inserted"""
    SEGMENT = "segment"
    SUBSTEP = "substep"


class PhaseLabel(Enum):
    """Entanglement regime of a three-spin ground state"""
    PRODUCT = "product"
    W_TYPE = "w_type"
    GHZ_TYPE = "ghz_type"
    BISEPARABLE = "biseparable"
    DEGENERATE = "degenerate"


class PulseElementKind(Enum):
    """Abstract element of a compiled pulse plan"""
    ROTATION = "rotation"
    COUPLING = "coupling"
    OFFSET = "offset"


def _finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise InvalidParameterError(f"{name} must be finite")


@dataclass(frozen=True)
class HamiltonianParams:
    """
    Coefficients of the one-, two- and three-body Ising chain Hamiltonian
    """
    omega_z: float
    omega_x: float
    j2: float
    j3: float
    n_spins: int = 3
    periodic: bool = True

    def __post_init__(self):
        """Validate data after initialization"""
        for name in ("omega_z", "omega_x", "j2", "j3"):
            _finite(name, getattr(self, name))
        if self.n_spins < 1:
            raise InvalidParameterError("n_spins must be at least 1")
        if self.n_spins > MAX_DENSE_SPINS:
            raise InvalidParameterError(f"n_spins must be at most {MAX_DENSE_SPINS}")
        if self.n_spins < 3 and self.j3 != 0:
            raise InvalidParameterError("j3 must be 0 when n_spins < 3")

    @property
    def dim(self) -> int:
        return 2 ** self.n_spins

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary representation"""
        return {
            'omega_z': self.omega_z,
            'omega_x': self.omega_x,
            'j2': self.j2,
            'j3': self.j3,
            'n_spins': self.n_spins,
            'periodic': self.periodic
        }


@dataclass(frozen=True)
class Schedule:
    """
    Adiabatic scan of one coupling from c_start to c_end in M steps over time T
    """
    control: ControlKnob
    c_start: float
    c_end: float
    total_time: float
    steps: int
    shape: ScheduleShape = ScheduleShape.HYPERBOLIC_SINE
    sharpness: float = 3.0
    substeps: int = 1
    mirrored: bool = False  # profile traversed backwards in time

    def __post_init__(self):
        """Validate data after initialization"""
        _finite("c_start", self.c_start)
        _finite("c_end", self.c_end)
        if not (self.total_time > 0 and math.isfinite(self.total_time)):
            raise InvalidParameterError("total_time must be positive")
        if self.steps < 1:
            raise InvalidParameterError("steps must be at least 1")
        if self.substeps < 1:
            raise InvalidParameterError("substeps must be at least 1")
        if self.shape == ScheduleShape.HYPERBOLIC_SINE and not self.sharpness > 0:
            raise InvalidParameterError("sharpness must be positive")

    @property
    def tau(self) -> float:
        """Duration of one segment"""
        return self.total_time / self.steps

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary representation"""
        return {
            'control': self.control.value,
            'c_start': self.c_start,
            'c_end': self.c_end,
            'total_time': self.total_time,
            'steps': self.steps,
            'shape': self.shape.value,
            'sharpness': self.sharpness,
            'substeps': self.substeps,
            'mirrored': self.mirrored
        }


@dataclass(frozen=True)
class DecoherenceParams:
    """
    Per-qubit relaxation applied after every segment (or sub-step)

    Times are seconds; math.inf disables a channel.
    """
    t2_eff: float
    step_physical_duration: float
    t1: float = math.inf
    granularity: DecoherenceGranularity = DecoherenceGranularity.SEGMENT

    def __post_init__(self):
        """Validate data after initialization"""
        if not self.t2_eff > 0:
            raise InvalidParameterError("t2_eff must be positive")
        if not self.t1 > 0:
            raise InvalidParameterError("t1 must be positive")
        if not (self.step_physical_duration >= 0 and math.isfinite(self.step_physical_duration)):
            raise InvalidParameterError("step_physical_duration must be non-negative")
        if math.isfinite(self.t1) and self.t2_eff > 2 * self.t1:
            raise InvalidParameterError("t2_eff must not exceed 2*t1")

    @classmethod
    def from_reference(cls, t2_eff: float, reference_total: float, reference_steps: int = 8,
                       t1: float = math.inf,
                       granularity: DecoherenceGranularity = DecoherenceGranularity.SEGMENT
                       ) -> 'DecoherenceParams':
        """Fixed per-step duration taken from a reference scan length"""
        if reference_steps < 1:
            raise InvalidParameterError("reference_steps must be at least 1")
        return cls(t2_eff=t2_eff, step_physical_duration=reference_total / reference_steps,
                   t1=t1, granularity=granularity)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary representation"""
        return {
            't2_eff': self.t2_eff,
            't1': self.t1,
            'step_physical_duration': self.step_physical_duration,
            'granularity': self.granularity.value
        }


@dataclass(eq=False)
class GroundStateReport:
    """
    Lowest eigenvalue, its eigenspace and the gap to the next level
    """
    energy: float
    degeneracy: int
    ground_space: np.ndarray = field(repr=False)  # columns are orthonormal states
    gap: float
    eigenvalues: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        """Validate data after initialization"""
        if self.degeneracy < 1:
            raise InvalidParameterError("degeneracy must be at least 1")
        if self.ground_space.ndim != 2 or self.ground_space.shape[1] != self.degeneracy:
            raise InvalidParameterError("ground_space must hold one column per degenerate state")
        if not self.gap > 0:
            raise InvalidParameterError("gap must be positive")

    @property
    def is_degenerate(self) -> bool:
        return self.degeneracy > 1

    @property
    def ground_state(self) -> np.ndarray:
        """First ground vector"""
        return self.ground_space[:, 0]

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary representation"""
        return {
            'energy': self.energy,
            'degeneracy': self.degeneracy,
            'gap': self.gap
        }


@dataclass(frozen=True)
class ScanPoint:
    """One sample of a critical point scan"""
    knob_value: float
    gap: float
    energy: float
    degeneracy: int
    label: Optional[PhaseLabel] = None


@dataclass(frozen=True)
class PhasePoint:
    """One cell of a (J2, J3) regime map"""
    j2: float
    j3: float
    energy: float
    gap: float
    degeneracy: int
    tangle: float
    label: PhaseLabel

    def to_dict(self) -> Dict[str, Any]:
        return {
            'j2': self.j2,
            'j3': self.j3,
            'energy': self.energy,
            'gap': self.gap,
            'degeneracy': self.degeneracy,
            'tangle': self.tangle,
            'label': self.label.value
        }


@dataclass(eq=False)
class WitnessOperator:
    """
    Projector witness a*I - |psi><psi|; negative expectation certifies entanglement
    """
    offset: float
    reference_state: np.ndarray = field(repr=False)
    label: str = ""

    def __post_init__(self):
        """Validate data after initialization"""
        if not (0.0 < self.offset < 1.0):
            raise InvalidParameterError("offset must be between 0.0 and 1.0")
        self.reference_state = np.asarray(self.reference_state, dtype=complex)
        if self.reference_state.ndim != 1:
            raise InvalidParameterError("reference_state must be a vector")
        if abs(np.linalg.norm(self.reference_state) - 1.0) > NORM_TOL:
            raise InvalidParameterError("reference_state must be normalized")

    @property
    def dim(self) -> int:
        return self.reference_state.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        psi = self.reference_state
        return self.offset * np.eye(self.dim, dtype=complex) - np.outer(psi, psi.conj())


@dataclass(frozen=True)
class CorrelationReport:
    """
    Pairwise <sx_i sx_j> values and their mean over unordered pairs
    """
    pairwise: Dict[Tuple[int, int], float]
    c_xx: float
    c_xx_ordered_sum: float

    def __post_init__(self):
        """Validate data after initialization"""
        if not self.pairwise:
            raise InvalidParameterError("pairwise cannot be empty")
        for pair, value in self.pairwise.items():
            if not (-1.0 - 1e-9 <= value <= 1.0 + 1e-9):
                raise InvalidParameterError(f"pairwise value for {pair} must be within [-1, 1]")


@dataclass(eq=False)
class StepRecord:
    """
    State of the scan after segment m
    """
    m: int
    time: float
    control: float
    fidelity: float
    purity: float
    c_xx: float
    witness_w: float
    witness_ghz: float
    energy: float
    gap: float
    state: np.ndarray = field(repr=False)
    ground_state: np.ndarray = field(repr=False)

    def __post_init__(self):
        """Validate data after initialization"""
        if not (-1e-9 <= self.fidelity <= 1.0 + 1e-9):
            raise InvalidParameterError("fidelity must be between 0.0 and 1.0")

    def to_row(self) -> Dict[str, Any]:
        return {
            'm': self.m,
            't': self.time,
            'control': self.control,
            'fidelity': self.fidelity,
            'purity': self.purity,
            'C_xx': self.c_xx,
            'witness_W': self.witness_w,
            'witness_GHZ': self.witness_ghz,
            'energy': self.energy
        }


@dataclass(eq=False)
class ScanTrace:
    """
    Per-step records of one adiabatic scan, m = 0..M
    """
    params: HamiltonianParams
    schedule: Schedule
    evolution: EvolutionMode
    decoherence: Optional[DecoherenceParams]
    records: List[StepRecord] = field(default_factory=list)
    w_witness: Optional[WitnessOperator] = None
    ghz_witness: Optional[WitnessOperator] = None

    @property
    def fidelities(self) -> np.ndarray:
        return np.array([r.fidelity for r in self.records])

    @property
    def min_fidelity(self) -> float:
        return float(self.fidelities.min())

    @property
    def final(self) -> StepRecord:
        return self.records[-1]

    def column(self, name: str) -> np.ndarray:
        """Values of one StepRecord attribute across the scan"""
        return np.array([getattr(r, name) for r in self.records])

    def to_rows(self) -> List[Dict[str, Any]]:
        return [r.to_row() for r in self.records]


@dataclass(frozen=True)
class NmrSystem:
    """
    Three-spin NMR register: Larmor offsets and scalar couplings in Hz
    """
    larmor: Tuple[float, float, float]
    j12: float
    j13: float
    j23: float
    t1: Tuple[float, float, float] = (math.inf, math.inf, math.inf)
    t2: Tuple[float, float, float] = (math.inf, math.inf, math.inf)

    def __post_init__(self):
        """Validate data after initialization"""
        if len(self.larmor) != 3:
            raise InvalidParameterError("larmor must hold three frequencies")
        for name in ("j12", "j13", "j23"):
            _finite(name, getattr(self, name))

    def coupling(self, a: int, b: int) -> float:
        """Scalar coupling between spins a and b (1-based, any order)"""
        key = tuple(sorted((a, b)))
        table = {(1, 2): self.j12, (1, 3): self.j13, (2, 3): self.j23}
        if key not in table:
            raise InvalidParameterError(f"no coupling for spins {a} and {b}")
        return table[key]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'larmor': list(self.larmor),
            'j12': self.j12,
            'j13': self.j13,
            'j23': self.j23
        }


@dataclass(frozen=True)
class PulseElement:
    """
    One abstract element of a pulse plan

    ROTATION: e^{-i angle sigma_axis / 2} on each listed spin.
    OFFSET: the same for axis z, driven by frequency offsets.
    COUPLING: e^{-i angle sz_a sz_b} realized by free evolution of the listed
    pair for `duration` seconds with `refocus` spins inverted at mid-interval.
    """
    kind: PulseElementKind
    spins: Tuple[int, ...]
    angle: float
    axis: str = "z"
    duration: float = 0.0
    refocus: Tuple[int, ...] = ()
    note: str = ""

    def __post_init__(self):
        """Validate data after initialization"""
        if not self.spins:
            raise InvalidParameterError("spins cannot be empty")
        if self.axis not in ("x", "y", "z"):
            raise InvalidParameterError("axis must be one of x, y, z")
        if self.kind == PulseElementKind.COUPLING and len(self.spins) != 2:
            raise InvalidParameterError("coupling elements must name exactly two spins")

    def to_dict(self) -> Dict[str, Any]:
        return {
            'kind': self.kind.value,
            'spins': list(self.spins),
            'axis': self.axis,
            'angle': self.angle,
            'duration': self.duration,
            'refocus': list(self.refocus),
            'note': self.note
        }


@dataclass(frozen=True)
class PulsePlan:
    """
    One Trotter step compiled into delays, offsets and an abstract element list
    """
    tau: float
    delays: Tuple[float, float, float]
    d1: float
    offsets: Optional[Tuple[float, float, float]]
    elements: Tuple[PulseElement, ...]
    timing_degenerate: bool = False
    realizable: bool = True
    warnings: Tuple[str, ...] = ()

    @property
    def total_duration(self) -> float:
        """Sum of realized coupling interval durations"""
        return sum(e.duration for e in self.elements)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'tau': self.tau,
            'delays': list(self.delays),
            'd1': self.d1,
            'offsets': list(self.offsets) if self.offsets is not None else None,
            'timing_degenerate': self.timing_degenerate,
            'realizable': self.realizable,
            'warnings': list(self.warnings),
            'elements': [e.to_dict() for e in self.elements]
        }


@dataclass
class RunSummary:
    """
    End-of-run digest written next to a scan CSV
    """
    case: str
    steps: int
    final_fidelity: float
    final_fidelity_rescaled: float
    final_experimental_fidelity: float
    final_witness_w: float
    final_witness_ghz: float
    final_witness_w_rescaled: float
    final_witness_ghz_rescaled: float
    min_fidelity: float
    transition_control: float
    transition_step: int
    transition_signal: str
    c_xx_range: float
    final_label: str
    decoherence: bool

    def to_dict(self) -> Dict[str, Any]:
        return dict(self.__dict__)
