# src/services/experiment_service.py
"""
Experiment orchestration: adiabatic scans, step-count sweeps, regime maps,
pulse compilation and the analytic self-test
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..config.experiment_config import ExperimentConfig
from ..config.settings import DEFAULT_GHZ_THRESHOLD, DEFAULT_PRODUCT_TOL
from ..models.data_models import (
    ControlKnob, HamiltonianParams, PhasePoint, PulsePlan, RunSummary, ScanTrace,
)
from ..physics.adiabatic_engine import (
    min_fidelity_vs_steps, run_adiabatic_scan, trotter_error_slope, trotter_step_unitary,
)
from ..physics.ground_state import (
    classify_phase, critical_point_scan, crossing_location, ground_state_report, minimum_gap,
    phase_grid,
)
from ..physics.hamiltonian_model import exemplar_states, with_control
from ..physics.observables import (
    correlation_zz, effective_polarization, experimental_fidelity, ghz_witness,
    measure_witness_projectively, rescale_population, w_witness, witness_expectation,
    witness_to_dict,
)
from ..physics.pulse_compiler import compile_step, format_plan, plan_rows, process_fidelity, simulate_plan
from ..physics.spin_algebra import PAULI, density_from_state
from ..utils.error_handler import InvalidParameterError, handle_errors
from ..utils.logging_config import log_performance
from .csv_writer import MSWEEP_COLUMNS, PHASE_COLUMNS, PULSE_COLUMNS, SCAN_COLUMNS, CsvWriter

logger = logging.getLogger(__name__)

DEFAULT_M_LIST = (2, 4, 8, 16, 32, 64)
FLAT_CORRELATION_RANGE = 0.1  # below this C_xx is not used to locate the transition
TROTTER_TAUS = (0.1, 0.05, 0.025, 0.0125)


@dataclass
class SelfTestResult:
    name: str
    passed: bool
    detail: str


def _largest_jump(values: np.ndarray) -> Tuple[int, float]:
    """(index m of the record after the largest |step|, signed step)"""
    steps = np.diff(values)
    index = int(np.argmax(np.abs(steps)))
    return index + 1, float(steps[index])


def summarize_trace(trace: ScanTrace, case: str,
                    ghz_threshold: float = DEFAULT_GHZ_THRESHOLD,
                    product_tol: float = DEFAULT_PRODUCT_TOL) -> RunSummary:
    """
    End-of-run digest: raw and decay-rescaled endpoint values and the step
    where the transition shows up
    """
    if trace.w_witness is None or trace.ghz_witness is None:
        raise InvalidParameterError("run summaries need a 3-spin scan with witnesses")
    steps = trace.column("m").astype(float)
    fidelities = trace.fidelities
    final = trace.final
    dim = trace.params.dim

    w_population = trace.w_witness.offset - trace.column("witness_w")
    ghz_population = trace.ghz_witness.offset - trace.column("witness_ghz")

    if trace.decoherence is None:
        rescaled_fidelity = fidelities
        rescaled_w, rescaled_ghz = w_population, ghz_population
    else:
        norms = [effective_polarization(r.state) for r in trace.records]
        rescaled_fidelity = rescale_population(steps, fidelities, norms, dim)
        rescaled_w = rescale_population(steps, w_population, norms, dim)
        rescaled_ghz = rescale_population(steps, ghz_population, norms, dim)

    c_xx = trace.column("c_xx")
    c_xx_range = float(c_xx.max() - c_xx.min())
    if c_xx_range >= FLAT_CORRELATION_RANGE:
        signal = "C_xx"
        transition_step, _ = _largest_jump(c_xx)
    else:
        candidates = {"witness_W": trace.column("witness_w"), "witness_GHZ": trace.column("witness_ghz")}
        jumps = {name: _largest_jump(values) for name, values in candidates.items()}
        signal = max(jumps, key=lambda name: abs(jumps[name][1]))
        transition_step = jumps[signal][0]

    p_end = with_control(trace.params, trace.schedule.control, trace.schedule.c_end)
    label = classify_phase(ground_state_report(p_end), p_end, ghz_threshold, product_tol)

    return RunSummary(
        case=case,
        steps=trace.schedule.steps,
        final_fidelity=float(final.fidelity),
        final_fidelity_rescaled=float(rescaled_fidelity[-1]),
        final_experimental_fidelity=experimental_fidelity(final.state, final.ground_state),
        final_witness_w=float(final.witness_w),
        final_witness_ghz=float(final.witness_ghz),
        final_witness_w_rescaled=float(trace.w_witness.offset - rescaled_w[-1]),
        final_witness_ghz_rescaled=float(trace.ghz_witness.offset - rescaled_ghz[-1]),
        min_fidelity=trace.min_fidelity,
        transition_control=float(trace.records[transition_step].control),
        transition_step=transition_step,
        transition_signal=signal,
        c_xx_range=c_xx_range,
        final_label=label.value,
        decoherence=trace.decoherence is not None,
    )


class ExperimentService:
    """
    Runs one CLI verb against an ExperimentConfig and writes its tables
    """

    def __init__(self, config: ExperimentConfig, writer: Optional[CsvWriter] = None):
        self.config = config
        self.writer = writer or CsvWriter(config.out or None)
        logger.info("ExperimentService initialized", extra={
            "case": config.case, "evolution": config.evolution,
            "decoherence": config.decoherence_enabled, "workers": config.workers
        })

    @handle_errors(component="experiment_service", operation="run_case")
    def run_case(self) -> Tuple[ScanTrace, RunSummary]:
        """Adiabatic scan to CSV plus a JSON summary next to it"""
        config = self.config
        trace = run_adiabatic_scan(config.hamiltonian_params(), config.schedule(),
                                   config.decoherence_params(), config.evolution_mode())
        summary = summarize_trace(trace, config.case, config.ghz_threshold, config.product_tol)

        self.writer.write_table("scan", SCAN_COLUMNS, trace.to_rows())
        final_zz = correlation_zz(trace.final.state)
        self.writer.write_json(".summary.json", {
            "summary": summary.to_dict(),
            "config": config.to_dict(),
            "final_c_zz": final_zz.c_xx,
            "witnesses": {
                "W": witness_to_dict(trace.w_witness),
                "GHZ": witness_to_dict(trace.ghz_witness)
            }
        })

        logger.info("Case run finished", extra=summary.to_dict())
        return trace, summary

    @handle_errors(component="experiment_service", operation="run_msweep")
    @log_performance(component="experiment_service")
    def run_msweep(self, M_list: Sequence[int] = DEFAULT_M_LIST) -> List[Tuple[int, float, float]]:
        """Minimum fidelity (ideal and noisy) for each step count"""
        if any(M < 1 for M in M_list):
            raise InvalidParameterError("every M must be at least 1")
        config = self.config
        results = min_fidelity_vs_steps(config.hamiltonian_params(), config.schedule(),
                                        config.decoherence_params(), list(M_list),
                                        config.evolution_mode(), max_workers=config.workers)
        self.writer.write_table("msweep", MSWEEP_COLUMNS, [
            {'M': M, 'min_fidelity_ideal': ideal, 'min_fidelity_noisy': noisy}
            for M, ideal, noisy in results
        ])
        return results

    @handle_errors(component="experiment_service", operation="run_phase_scan")
    @log_performance(component="experiment_service")
    def run_phase_scan(self, grid: int = 21, knob: Optional[ControlKnob] = None) -> List[PhasePoint]:
        """
        Regime labels over [c_start, c_end]: a (J2, J3) grid, or one knob
        with the other coupling at its configured value
        """
        if grid < 2:
            raise InvalidParameterError("grid must be at least 2")
        config = self.config
        p_base = config.hamiltonian_params()
        if p_base.n_spins != 3:
            raise InvalidParameterError("phase scans need n_spins == 3")
        lo, hi = sorted((config.c_start, config.c_end))
        axis = [float(v) for v in np.linspace(lo, hi, grid)]

        j2_values = axis if knob in (None, ControlKnob.J2) else [p_base.j2]
        j3_values = axis if knob in (None, ControlKnob.J3) else [p_base.j3]

        def scan_row(j2: float) -> List[PhasePoint]:
            return phase_grid(p_base, [j2], j3_values, config.ghz_threshold,
                              config.product_tol, config.degeneracy_tol)

        with ThreadPoolExecutor(max_workers=config.workers) as executor:
            rows = list(executor.map(scan_row, j2_values))
        points = [point for row in rows for point in row]

        self.writer.write_table("phase", PHASE_COLUMNS, [p.to_dict() for p in points])

        if knob is not None:
            scan = critical_point_scan(p_base, knob, lo, hi, grid, config.degeneracy_tol)
            sampled = minimum_gap(scan)
            location = crossing_location(scan, p_base, knob)
            refined_gap = ground_state_report(with_control(p_base, knob, location),
                                              config.degeneracy_tol).gap
            gap_minimum = {
                'knob': knob.value, 'location': location, 'gap': refined_gap,
                'sampled_location': sampled.knob_value, 'sampled_gap': sampled.gap,
                'interior': lo < sampled.knob_value < hi,
            }
            logger.info("Gap minimum located", extra=gap_minimum)
            self.writer.write_json(".gap.json", gap_minimum)
        return points

    @handle_errors(component="experiment_service", operation="compile_pulse")
    def compile_pulse(self, tau: Optional[float] = None,
                      control: Optional[float] = None) -> Tuple[PulsePlan, float]:
        """
        Compile one Trotter step at the given control value (default c_end)
        and check it against the model step unitary
        """
        config = self.config
        schedule = config.schedule()
        tau = schedule.tau / schedule.substeps if tau is None else tau
        value = config.c_end if control is None else control
        p = with_control(config.hamiltonian_params(), schedule.control, value)
        system = config.nmr_system()

        plan = compile_step(p, tau, system)
        score = process_fidelity(simulate_plan(plan, system), trotter_step_unitary(p, tau))
        logger.info("Pulse plan compiled", extra={"tau": tau, "control": value,
                                                  "elements": len(plan.elements),
                                                  "process_fidelity": score})

        if self.writer.path is None:
            self.writer.stream_text(format_plan(plan) + f"\n# process fidelity: {score:.12f}\n")
        else:
            self.writer.write_table("pulse_plan", PULSE_COLUMNS, plan_rows(plan))
            self.writer.write_json(".plan.json", {**plan.to_dict(), "process_fidelity": score,
                                                  "nmr": system.to_dict()})
        return plan, score

    def selftest(self) -> List[SelfTestResult]:
        """Fast analytic checks of the numerical core"""
        results = []

        def check(name: str, passed: bool, detail: str) -> None:
            results.append(SelfTestResult(name, bool(passed), detail))
            log = logger.info if passed else logger.error
            log("Self-test check", extra={"check": name, "passed": bool(passed), "detail": detail})

        X, Y, Z = PAULI["X"], PAULI["Y"], PAULI["Z"]
        check("pauli_algebra", np.allclose(X @ Y, 1j * Z) and np.allclose(Z @ Z, np.eye(2)),
              "XY = iZ, Z^2 = I")

        report = ground_state_report(HamiltonianParams(omega_z=0.0, omega_x=0.0, j2=0.0, j3=1.0))
        check("three_body_degeneracy", report.degeneracy == 4, f"degeneracy {report.degeneracy}")

        states = exemplar_states(3)
        w_value = witness_expectation(density_from_state(states["w"]), w_witness())
        ghz_value = witness_expectation(density_from_state(states["ghz_minus"]), ghz_witness(-1))
        check("witness_exemplars",
              math.isclose(w_value, -1 / 3, abs_tol=1e-9) and math.isclose(ghz_value, -0.25, abs_tol=1e-9),
              f"W {w_value:.12f}, GHZ {ghz_value:.12f}")

        mixed = np.eye(8, dtype=complex) / 8
        projective = measure_witness_projectively(mixed, ghz_witness(-1))
        check("projective_witness", math.isclose(projective, 0.625, abs_tol=1e-10),
              f"mixed-state GHZ witness {projective:.12f}")

        slope = trotter_error_slope(HamiltonianParams(omega_z=-2.0, omega_x=0.09, j2=1.0, j3=0.0),
                                    TROTTER_TAUS)
        check("trotter_order", abs(slope - 3.0) <= 0.2, f"slope {slope:.4f}")

        rng = np.random.default_rng(self.config.seed)
        p = HamiltonianParams(omega_z=float(rng.uniform(-2, 2)), omega_x=float(rng.uniform(-1, 1)),
                              j2=float(rng.uniform(0.1, 2)), j3=float(rng.uniform(0.1, 2)))
        tau = float(rng.uniform(0.01, 0.1))
        system = self.config.nmr_system()
        score = process_fidelity(simulate_plan(compile_step(p, tau, system), system),
                                 trotter_step_unitary(p, tau))
        check("pulse_round_trip", score >= 1 - 1e-6, f"process fidelity {score:.12f}")

        return results
