# src/physics/pulse_compiler.py
"""
Compile one symmetric Trotter step of the 3-spin model into an NMR-style
schedule and verify it by composing the realized unitaries

Coupling elements are realized as free evolution under the scalar couplings
(pi J_ab / 2) sz_a sz_b, with the third spin inverted at mid-interval and at
the end so its couplings cancel. The three-body term is a (1,2) coupling
interval conjugated by spin-2 rotations and (2,3) quarter-angle couplings.
"""
import logging
import math
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src.models.data_models import (
    HamiltonianParams, NmrSystem, PulseElement, PulseElementKind, PulsePlan,
)
from src.physics.hamiltonian_model import bonds, triples
from src.physics.spin_algebra import single_spin_rotation, z_signs
from src.utils.error_handler import PlanCompilationError

logger = logging.getLogger(__name__)

EVEN_PERMUTATIONS = [(1, 2, 3), (2, 3, 1), (3, 1, 2)]


def caption_delays(p: HamiltonianParams, tau: float, sys: NmrSystem) -> Tuple[float, float, float]:
    """
    tau_i = J2 tau / [1/(pi J_ij) + 1/(pi J_jk)] for (i, j, k) the even
    permutations of (1, 2, 3)
    """
    delays = []
    for i, j, k in EVEN_PERMUTATIONS:
        j_ij, j_jk = sys.coupling(i, j), sys.coupling(j, k)
        if j_ij == 0 or j_jk == 0:
            raise PlanCompilationError(f"coupling J_{i}{j} or J_{j}{k} is zero")
        denominator = 1.0 / (math.pi * j_ij) + 1.0 / (math.pi * j_jk)
        if denominator == 0:
            raise PlanCompilationError(f"delay tau_{i} has a vanishing denominator")
        delays.append(p.j2 * tau / denominator)
    return tuple(delays)


def three_body_delay(p: HamiltonianParams, tau: float, sys: NmrSystem) -> float:
    """d1 = 2 J3 tau / (pi J_12)"""
    if sys.j12 == 0:
        raise PlanCompilationError("coupling J_12 is zero")
    return 2.0 * p.j3 * tau / (math.pi * sys.j12)


def offset_frequencies(p: HamiltonianParams, tau: float,
                       delays: Tuple[float, float, float]) -> Optional[Tuple[float, float, float]]:
    """
    FQ1 = 2 wz tau/(t1 - t2 + 3 t3), FQ2 = 2 wz tau/(t1 + t2 - t3),
    FQ3 = 2 wz tau/(t1 + t2 + t3); None when a denominator vanishes
    """
    t1, t2, t3 = delays
    denominators = (t1 - t2 + 3 * t3, t1 + t2 - t3, t1 + t2 + t3)
    if any(abs(den) < 1e-300 for den in denominators):
        return None
    return tuple(2.0 * p.omega_z * tau / den for den in denominators)


def _coupling_element(a: int, b: int, angle: float, sys: NmrSystem, note: str) -> PulseElement:
    """
    Free-evolution interval realizing exp(-i angle sz_a sz_b)

    The angle is shifted by multiples of pi (a global phase) so that the
    duration 2 angle / (pi J_ab) is non-negative.
    """
    coupling = sys.coupling(a, b)
    if coupling == 0:
        raise PlanCompilationError(f"coupling J_{min(a, b)}{max(a, b)} is zero")
    realized = angle
    if coupling > 0:
        realized = angle % math.pi if angle < 0 else angle
    else:
        realized = -((-angle) % math.pi) if angle > 0 else angle
    duration = 2.0 * realized / (math.pi * coupling)
    refocus = tuple(s for s in (1, 2, 3) if s not in (a, b))
    return PulseElement(kind=PulseElementKind.COUPLING, spins=(a, b), angle=realized,
                        duration=duration, refocus=refocus, note=note)


def _rotation(site: int, axis: str, angle: float, note: str = "") -> PulseElement:
    return PulseElement(kind=PulseElementKind.ROTATION, spins=(site,), axis=axis,
                        angle=angle, note=note)


def _three_body_block(angle: float, sys: NmrSystem) -> List[PulseElement]:
    """exp(-i angle sz1 sz2 sz3) from two-body intervals and spin-2 rotations"""
    half_pi = math.pi / 2
    quarter_pi = math.pi / 4
    return [
        _rotation(2, "x", -half_pi, "three-body frame"),
        _coupling_element(2, 3, -quarter_pi, sys, "three-body frame"),
        _rotation(2, "y", -half_pi, "three-body frame"),
        _coupling_element(1, 2, angle, sys, "three-body d1 interval"),
        _rotation(2, "y", half_pi, "three-body frame"),
        _coupling_element(2, 3, quarter_pi, sys, "three-body frame"),
        _rotation(2, "x", half_pi, "three-body frame"),
    ]


def compile_step(p: HamiltonianParams, tau: float, sys: NmrSystem) -> PulsePlan:
    """
    Delays, offsets and element list for one symmetric Trotter step of length tau
    """
    if p.n_spins != 3:
        raise PlanCompilationError("compile_step needs n_spins == 3")
    if not math.isfinite(tau):
        raise PlanCompilationError("tau must be finite")

    delays = caption_delays(p, tau, sys)
    d1 = three_body_delay(p, tau, sys)
    offsets = offset_frequencies(p, tau, delays)

    warnings = []
    if offsets is None:
        warnings.append("offset denominators vanish; timing is degenerate")
    realizable = all(t >= 0 for t in delays) and d1 >= 0
    if not realizable:
        warnings.append("negative delay; plan is not physically realizable")

    half_x = [_rotation(site, "x", p.omega_x * tau, "transverse half step") for site in (1, 2, 3)]

    body: List[PulseElement] = []
    if p.omega_z != 0:
        body += [PulseElement(kind=PulseElementKind.OFFSET, spins=(site,), axis="z",
                              angle=2.0 * p.omega_z * tau, note="field via frequency offset")
                 for site in (1, 2, 3)]
    if p.j2 != 0:
        body += [_coupling_element(a, b, p.j2 * tau, sys, "two-body interval") for a, b in bonds(p)]
    if p.j3 != 0:
        # one block realizes all wrapped triples at once
        body += _three_body_block(len(triples(p)) * p.j3 * tau, sys)

    plan = PulsePlan(tau=tau, delays=delays, d1=d1, offsets=offsets,
                     elements=tuple(half_x + body + half_x),
                     timing_degenerate=offsets is None, realizable=realizable,
                     warnings=tuple(warnings))
    for message in warnings:
        logger.warning(message, extra={"tau": tau})
    return plan


def _refocused_interval(element: PulseElement, sys: NmrSystem) -> np.ndarray:
    """
    Free coupling evolution for element.duration with pi_x pulses on the
    refocused spins at mid-interval and at the end
    """
    signs = z_signs(3).astype(float)
    couplings = np.zeros(8)
    for a, b in ((1, 2), (1, 3), (2, 3)):
        couplings += (math.pi * sys.coupling(a, b) / 2.0) * signs[a - 1] * signs[b - 1]
    half = np.diag(np.exp(-1j * couplings * element.duration / 2.0))
    flip = np.eye(8, dtype=complex)
    for site in element.refocus:
        flip = single_spin_rotation("x", math.pi, site, 3) @ flip
    return flip @ half @ flip @ half


def element_unitary(element: PulseElement, sys: NmrSystem) -> np.ndarray:
    if element.kind == PulseElementKind.COUPLING:
        return _refocused_interval(element, sys)
    U = np.eye(8, dtype=complex)
    for site in element.spins:
        U = single_spin_rotation(element.axis, element.angle, site, 3) @ U
    return U


def simulate_plan(plan: PulsePlan, sys: NmrSystem) -> np.ndarray:
    """Product of the realized element unitaries in time order"""
    U = np.eye(8, dtype=complex)
    for element in plan.elements:
        if any(not 1 <= s <= 3 for s in element.spins + element.refocus):
            raise PlanCompilationError(f"element targets a spin outside 1..3: {element}")
        U = element_unitary(element, sys) @ U
    return U


def process_fidelity(U: np.ndarray, V: np.ndarray) -> float:
    """|tr(U^dagger V)|^2 / d^2, insensitive to global phase"""
    dim = U.shape[0]
    return float(abs(np.trace(U.conj().T @ V)) ** 2 / dim ** 2)


def format_plan(plan: PulsePlan) -> str:
    """Human-readable schedule listing"""
    lines = [f"# one Trotter step, tau = {plan.tau:.6g}"]
    lines.append("# delays tau_1..tau_3: " + ", ".join(f"{t:.6g}" for t in plan.delays))
    lines.append(f"# d1: {plan.d1:.6g}")
    if plan.offsets is None:
        lines.append("# offsets FQ1..FQ3: degenerate")
    else:
        lines.append("# offsets FQ1..FQ3: " + ", ".join(f"{f:.6g}" for f in plan.offsets))
    lines.append(f"# realizable: {plan.realizable}")
    for index, e in enumerate(plan.elements):
        target = ",".join(str(s) for s in e.spins)
        if e.kind == PulseElementKind.COUPLING:
            refocus = ",".join(str(s) for s in e.refocus) or "-"
            lines.append(f"{index:3d}  coupling  spins {target:5s}  angle {e.angle:+.6f}  "
                         f"duration {e.duration:.6g} s  refocus {refocus}  {e.note}")
        else:
            lines.append(f"{index:3d}  {e.kind.value:8s}  spins {target:5s}  axis {e.axis}  "
                         f"angle {e.angle:+.6f}  {e.note}")
    return "\n".join(lines)


def plan_rows(plan: PulsePlan) -> List[Dict[str, Any]]:
    """One CSV row per element"""
    return [
        {
            'index': index,
            'kind': e.kind.value,
            'spins': " ".join(str(s) for s in e.spins),
            'axis': e.axis if e.kind != PulseElementKind.COUPLING else "zz",
            'angle': e.angle,
            'duration': e.duration,
            'refocus': " ".join(str(s) for s in e.refocus),
            'note': e.note
        }
        for index, e in enumerate(plan.elements)
    ]
