# src/physics/adiabatic_engine.py
"""
Discretized adiabatic evolution: control schedules, symmetric Trotter steps,
exact segment propagators, a per-qubit relaxation channel and per-step
fidelity tracking
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.models.data_models import (
    DecoherenceGranularity, DecoherenceParams, EvolutionMode, HamiltonianParams,
    Schedule, ScheduleShape, ScanTrace, StepRecord, WitnessOperator,
)
from src.physics.ground_state import ground_state_report
from src.physics.hamiltonian_model import build_hamiltonian, split_xz, with_control
from src.physics.observables import (
    align_witness, correlation_xx, witness_candidates, witness_expectation,
)
from src.physics.spin_algebra import (
    density_from_state, n_spins_for_dim, purity, unitary_exp,
)
from src.utils.error_handler import DegenerateStateError, InvalidParameterError
from src.utils.logging_config import log_performance

logger = logging.getLogger(__name__)


def _profile(s: Schedule, fraction: float) -> float:
    """Normalized shape f(x) with f(0) = 0 and f(1) = 1"""
    if s.shape == ScheduleShape.LINEAR:
        return fraction
    return math.sinh(s.sharpness * fraction) / math.sinh(s.sharpness)


def control_value(s: Schedule, m: int) -> float:
    """
    Control parameter at grid point m, C(mT/M)

    Mirrored schedules traverse the profile backwards: c(m) = c_start +
    (c_end - c_start) * (1 - f(1 - m/M)).
    """
    if not 0 <= m <= s.steps:
        raise InvalidParameterError(f"m must be between 0 and {s.steps}, got {m}")
    if m == 0:
        return s.c_start
    if m == s.steps:
        return s.c_end
    fraction = m / s.steps
    if s.mirrored:
        weight = 1.0 - _profile(s, 1.0 - fraction)
    else:
        weight = _profile(s, fraction)
    return s.c_start + (s.c_end - s.c_start) * weight


def segment_control(s: Schedule, m: int) -> float:
    """
    Control value held during segment m (1..M)

    Segments use the grid point that is later in unmirrored time, so a
    mirrored scan applies the forward segments in exactly reversed order.
    """
    if not 1 <= m <= s.steps:
        raise InvalidParameterError(f"segment must be between 1 and {s.steps}, got {m}")
    return control_value(s, m - 1) if s.mirrored else control_value(s, m)


def reverse_schedule(s: Schedule) -> Schedule:
    """Same path run from c_end back to c_start"""
    return replace(s, c_start=s.c_end, c_end=s.c_start, mirrored=not s.mirrored)


def trotter_step_unitary(p: HamiltonianParams, tau: float) -> np.ndarray:
    """Symmetric splitting e^{-i Hx tau/2} e^{-i Hz tau} e^{-i Hx tau/2}"""
    hx, hz = split_xz(p)
    half_x = unitary_exp(hx, tau / 2.0)
    full_z = np.diag(np.exp(-1j * np.real(np.diag(hz)) * tau))
    return half_x @ full_z @ half_x


def trotter_error(p: HamiltonianParams, tau: float) -> float:
    """Spectral norm of S(tau) - e^{-iH tau}"""
    exact = unitary_exp(build_hamiltonian(p), tau)
    return float(np.linalg.norm(trotter_step_unitary(p, tau) - exact, 2))


def trotter_error_slope(p: HamiltonianParams, taus: Sequence[float]) -> float:
    """Log-log slope of the one-step splitting error; 3 for the symmetric form"""
    if len(taus) < 2:
        raise InvalidParameterError("taus must hold at least two values")
    errors = [trotter_error(p, tau) for tau in taus]
    if min(errors) <= 0:
        raise InvalidParameterError("splitting error vanishes; the terms commute")
    slope, _ = np.polyfit(np.log(taus), np.log(errors), 1)
    return float(slope)


def segment_unitary(p: HamiltonianParams, tau: float, evolution: EvolutionMode,
                    substeps: int = 1) -> np.ndarray:
    """Propagator of one segment; Trotter segments use `substeps` equal steps"""
    if evolution == EvolutionMode.EXACT:
        return unitary_exp(build_hamiltonian(p), tau)
    step = trotter_step_unitary(p, tau / substeps)
    return np.linalg.matrix_power(step, substeps)


def _apply_local_channel(rho: np.ndarray, kraus: Sequence[np.ndarray], site: int,
                         n_spins: int) -> np.ndarray:
    letters = "abcdefghijklmnopqrstuvwx"
    rows = letters[:n_spins]
    cols = letters[n_spins:2 * n_spins]
    r, c = rows[site - 1], cols[site - 1]
    operand = rows + cols
    result = operand.replace(r, "y").replace(c, "z")
    expression = f"y{r},{operand},z{c}->{result}"
    tensor = rho.reshape([2] * (2 * n_spins))
    out = sum(np.einsum(expression, K, tensor, K.conj()) for K in kraus)
    return out.reshape(rho.shape)


def relaxation_kraus(d: DecoherenceParams, duration: float) -> List[np.ndarray]:
    """
    Single-qubit Kraus operators: amplitude damping toward |up> (rate 1/t1)
    followed by pure dephasing so coherences decay as exp(-duration/t2_eff)
    """
    amplitude_keep = math.exp(-duration / d.t1) if math.isfinite(d.t1) else 1.0
    coherence = math.exp(-duration / d.t2_eff) if math.isfinite(d.t2_eff) else 1.0
    # amplitude damping already shrinks coherences by sqrt(amplitude_keep)
    dephase = coherence / math.sqrt(amplitude_keep)

    gamma = 1.0 - amplitude_keep
    damping = [
        np.array([[1.0, 0.0], [0.0, math.sqrt(amplitude_keep)]], dtype=complex),
        np.array([[0.0, math.sqrt(gamma)], [0.0, 0.0]], dtype=complex),
    ]
    dephasing = [
        math.sqrt((1.0 + dephase) / 2.0) * np.eye(2, dtype=complex),
        math.sqrt((1.0 - dephase) / 2.0) * np.diag([1.0, -1.0]).astype(complex),
    ]
    return [B @ A for B in dephasing for A in damping]


def apply_decoherence(rho: np.ndarray, d: DecoherenceParams,
                      duration: Optional[float] = None) -> np.ndarray:
    """
    Independent relaxation of every qubit for `duration` seconds
    (default d.step_physical_duration)
    """
    rho = np.asarray(rho, dtype=complex)
    n_spins = n_spins_for_dim(rho.shape[0])
    duration = d.step_physical_duration if duration is None else duration
    if duration < 0:
        raise InvalidParameterError("duration must be non-negative")
    if duration == 0 or (math.isinf(d.t2_eff) and math.isinf(d.t1)):
        return rho.copy()

    kraus = relaxation_kraus(d, duration)
    out = rho
    for site in range(1, n_spins + 1):
        out = _apply_local_channel(out, kraus, site, n_spins)
    return 0.5 * (out + out.conj().T)


def _space_fidelity(rho: np.ndarray, ground_space: np.ndarray) -> float:
    """Population of the (possibly degenerate) ground space"""
    projected = ground_space.conj().T @ rho @ ground_space
    return float(np.real(np.trace(projected)))


def _evolve_segment(rho: np.ndarray, p: HamiltonianParams, s: Schedule,
                    evolution: EvolutionMode, d: Optional[DecoherenceParams]) -> np.ndarray:
    if d is not None and d.granularity == DecoherenceGranularity.SUBSTEP:
        part = segment_unitary(p, s.tau / s.substeps, evolution, 1)
        for _ in range(s.substeps):
            rho = part @ rho @ part.conj().T
            rho = apply_decoherence(rho, d, d.step_physical_duration / s.substeps)
        return rho

    U = segment_unitary(p, s.tau, evolution, s.substeps)
    rho = U @ rho @ U.conj().T
    if d is not None:
        rho = apply_decoherence(rho, d)
    return rho


def _record(m: int, s: Schedule, control: float, rho: np.ndarray, p: HamiltonianParams,
            w_witness: WitnessOperator, ghz_witness: WitnessOperator,
            fidelity_override: Optional[float] = None) -> StepRecord:
    report = ground_state_report(p)
    fidelity = _space_fidelity(rho, report.ground_space)
    if fidelity_override is not None:
        fidelity = fidelity_override
    return StepRecord(
        m=m,
        time=m * s.tau,
        control=control,
        fidelity=min(max(fidelity, 0.0), 1.0 + 1e-12),
        purity=purity(rho),
        c_xx=correlation_xx(rho).c_xx if p.n_spins == 3 else float("nan"),
        witness_w=witness_expectation(rho, w_witness) if w_witness else float("nan"),
        witness_ghz=witness_expectation(rho, ghz_witness) if ghz_witness else float("nan"),
        energy=float(np.real(np.trace(rho @ build_hamiltonian(p)))),
        gap=report.gap,
        state=rho.copy(),
        ground_state=report.ground_state.copy(),
    )


@log_performance(component="adiabatic_engine")
def run_adiabatic_scan(p0: HamiltonianParams, s: Schedule,
                       d: Optional[DecoherenceParams] = None,
                       evolution: EvolutionMode = EvolutionMode.EXACT,
                       w_witness: Optional[WitnessOperator] = None,
                       ghz_witness: Optional[WitnessOperator] = None) -> ScanTrace:
    """
    Start in the ground state of H(0) and step through H(1) .. H(M)

    Each segment lasts tau = T/M; decoherence (when given) follows every
    segment, or every Trotter sub-step for SUBSTEP granularity. Witnesses
    default to the variants best aligned with the final ground state.
    """
    if d is not None and d.granularity == DecoherenceGranularity.SUBSTEP \
            and evolution == EvolutionMode.EXACT and s.substeps == 1:
        raise InvalidParameterError(
            "substep decoherence granularity needs Trotter evolution or substeps > 1"
        )

    p_start = with_control(p0, s.control, control_value(s, 0))
    start = ground_state_report(p_start)
    if start.is_degenerate:
        raise DegenerateStateError(
            f"initial ground state is {start.degeneracy}-fold degenerate"
        )

    if p0.n_spins == 3 and (w_witness is None or ghz_witness is None):
        target = ground_state_report(with_control(p0, s.control, control_value(s, s.steps)))
        w_witness = w_witness or align_witness(target.ground_state, witness_candidates("w"))
        ghz_witness = ghz_witness or align_witness(target.ground_state, witness_candidates("ghz"))

    trace = ScanTrace(params=p0, schedule=s, evolution=evolution, decoherence=d,
                      w_witness=w_witness, ghz_witness=ghz_witness)

    rho = density_from_state(start.ground_state)
    # the initial state is the reference ground state itself
    trace.records.append(_record(0, s, s.c_start, rho, p_start, w_witness, ghz_witness,
                                 fidelity_override=1.0))

    for m in range(1, s.steps + 1):
        p_segment = with_control(p0, s.control, segment_control(s, m))
        rho = _evolve_segment(rho, p_segment, s, evolution, d)
        grid_value = control_value(s, m)
        trace.records.append(_record(m, s, grid_value, rho,
                                     with_control(p0, s.control, grid_value),
                                     w_witness, ghz_witness))

    logger.info("Adiabatic scan finished",
                extra={"steps": s.steps, "evolution": evolution.value,
                       "decoherence": d is not None,
                       "min_fidelity": trace.min_fidelity,
                       "final_fidelity": trace.final.fidelity})
    return trace


def min_fidelity_vs_steps(p0: HamiltonianParams, template: Schedule,
                          d: Optional[DecoherenceParams], M_list: Sequence[int],
                          evolution: EvolutionMode = EvolutionMode.EXACT,
                          max_workers: int = 4) -> List[Tuple[int, float, float]]:
    """
    (M, ideal min fidelity, noisy min fidelity) for every M, in M_list order

    The noisy column equals the ideal one when d is None.
    """
    if not M_list:
        raise InvalidParameterError("M_list cannot be empty")

    def run_one(M: int) -> Tuple[int, float, float]:
        schedule = replace(template, steps=int(M))
        ideal = run_adiabatic_scan(p0, schedule, None, evolution).min_fidelity
        noisy = ideal if d is None else run_adiabatic_scan(p0, schedule, d, evolution).min_fidelity
        return int(M), ideal, noisy

    with ThreadPoolExecutor(max_workers=max(1, max_workers)) as executor:
        results = list(executor.map(run_one, M_list))

    for M, ideal, noisy in results:
        logger.debug("Step-count sweep point", extra={"M": M, "ideal": ideal, "noisy": noisy})
    return results


def adiabaticity_report(trace: ScanTrace) -> Tuple[float, float]:
    """(smallest instantaneous gap along the scan, control value where it occurs)"""
    gaps = trace.column("gap")
    index = int(np.argmin(gaps))
    return float(gaps[index]), float(trace.records[index].control)
