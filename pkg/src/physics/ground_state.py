# src/physics/ground_state.py
"""
Exact ground states, gaps, degeneracy and entanglement-regime classification
"""
import logging
from typing import List, Optional, Sequence

import numpy as np
import scipy.optimize

from src.config.settings import (
    DEFAULT_DEGENERACY_TOL, DEFAULT_GHZ_THRESHOLD, DEFAULT_PRODUCT_TOL,
)
from src.models.data_models import (
    ControlKnob, GroundStateReport, HamiltonianParams, PhaseLabel, PhasePoint, ScanPoint,
)
from src.physics.hamiltonian_model import build_hamiltonian, with_control
from src.physics.spin_algebra import (
    check_state_vector, hermitian_eigensystem, single_spin_states,
)
from src.utils.error_handler import InvalidParameterError

logger = logging.getLogger(__name__)


def _fix_phase(vectors: np.ndarray) -> np.ndarray:
    """Make the largest component of every column real and positive"""
    fixed = vectors.copy()
    for k in range(fixed.shape[1]):
        column = fixed[:, k]
        pivot = column[int(np.argmax(np.abs(column)))]
        fixed[:, k] = column * (abs(pivot) / pivot)
    return fixed


def _eigensystem(H: np.ndarray):
    off_diagonal = H - np.diag(np.diag(H))
    if not np.any(off_diagonal):
        # Diagonal input: eigenvectors are exactly the basis states
        diag = np.real(np.diag(H))
        order = np.argsort(diag, kind="stable")
        return diag[order], np.eye(H.shape[0], dtype=complex)[:, order]
    return hermitian_eigensystem(H)


def ground_state_report(p: HamiltonianParams,
                        degeneracy_tol: float = DEFAULT_DEGENERACY_TOL) -> GroundStateReport:
    """
    Lowest eigenvalue, ground space and gap of the chain Hamiltonian

    Eigenvalues within degeneracy_tol * max(1, spectral width) of the minimum
    belong to the ground space.
    """
    if not degeneracy_tol > 0:
        raise InvalidParameterError("degeneracy_tol must be positive")

    eigenvalues, eigenvectors = _eigensystem(build_hamiltonian(p))
    width = float(eigenvalues[-1] - eigenvalues[0])
    cutoff = eigenvalues[0] + degeneracy_tol * max(1.0, width)
    degeneracy = int(np.count_nonzero(eigenvalues <= cutoff))
    gap = float(eigenvalues[degeneracy] - eigenvalues[0]) if degeneracy < len(eigenvalues) else float("inf")

    return GroundStateReport(
        energy=float(eigenvalues[0]),
        degeneracy=degeneracy,
        ground_space=_fix_phase(eigenvectors[:, :degeneracy]),
        gap=gap,
        eigenvalues=eigenvalues,
    )


def three_tangle(psi: np.ndarray) -> float:
    """
    Three-tangle of a 3-qubit pure state from Cayley's hyperdeterminant

    1 for GHZ states, 0 for W-class, biseparable and product states.
    """
    a = check_state_vector(psi)
    if a.shape[0] != 8:
        raise InvalidParameterError("three_tangle needs a 3-spin state")
    d1 = (a[0] ** 2 * a[7] ** 2 + a[1] ** 2 * a[6] ** 2
          + a[2] ** 2 * a[5] ** 2 + a[4] ** 2 * a[3] ** 2)
    d2 = (a[0] * a[7] * a[3] * a[4] + a[0] * a[7] * a[5] * a[2]
          + a[0] * a[7] * a[6] * a[1] + a[3] * a[4] * a[5] * a[2]
          + a[3] * a[4] * a[6] * a[1] + a[5] * a[2] * a[6] * a[1])
    d3 = a[0] * a[6] * a[5] * a[3] + a[7] * a[1] * a[2] * a[4]
    return float(4 * abs(d1 - 2 * d2 + 4 * d3))


def single_spin_entropies(psi: np.ndarray) -> np.ndarray:
    """Von Neumann entropy (bits) of each one-spin marginal of a pure state"""
    entropies = []
    for rho in single_spin_states(psi):
        weights = np.clip(np.linalg.eigvalsh(rho), 0.0, 1.0)
        weights = weights[weights > 1e-15]
        entropies.append(float(-np.sum(weights * np.log2(weights))))
    return np.array(entropies)


def classify_state(psi: np.ndarray,
                   ghz_threshold: float = DEFAULT_GHZ_THRESHOLD,
                   product_tol: float = DEFAULT_PRODUCT_TOL) -> PhaseLabel:
    """
    Entanglement class of a 3-qubit pure state

    GHZ when the three-tangle exceeds ghz_threshold; otherwise Product when
    no spin is entangled with the rest, W when every spin is, Biseparable
    in between.
    """
    if three_tangle(psi) > ghz_threshold:
        return PhaseLabel.GHZ_TYPE
    entangled = single_spin_entropies(psi) >= product_tol
    if not entangled.any():
        return PhaseLabel.PRODUCT
    if entangled.all():
        return PhaseLabel.W_TYPE
    return PhaseLabel.BISEPARABLE


def classify_phase(report: GroundStateReport, p: HamiltonianParams,
                   ghz_threshold: float = DEFAULT_GHZ_THRESHOLD,
                   product_tol: float = DEFAULT_PRODUCT_TOL) -> PhaseLabel:
    """Regime of a nondegenerate 3-spin ground state; Degenerate at level crossings"""
    if p.n_spins != 3:
        raise InvalidParameterError("classify_phase needs n_spins == 3")
    if report.is_degenerate:
        return PhaseLabel.DEGENERATE
    return classify_state(report.ground_state, ghz_threshold, product_tol)


def critical_point_scan(p_base: HamiltonianParams, knob: ControlKnob,
                        lo: float, hi: float, samples: int,
                        degeneracy_tol: float = DEFAULT_DEGENERACY_TOL) -> List[ScanPoint]:
    """
    Ground energy, gap and degeneracy at evenly spaced knob values in [lo, hi]
    """
    if samples < 2:
        raise InvalidParameterError("samples must be at least 2")
    if not (np.isfinite(lo) and np.isfinite(hi)) or hi < lo:
        raise InvalidParameterError("range must satisfy lo <= hi")

    points = []
    for value in np.linspace(lo, hi, samples):
        p = with_control(p_base, knob, float(value))
        report = ground_state_report(p, degeneracy_tol)
        label = classify_phase(report, p) if p.n_spins == 3 else None
        points.append(ScanPoint(knob_value=float(value), gap=report.gap, energy=report.energy,
                                degeneracy=report.degeneracy, label=label))

    best = minimum_gap(points)
    logger.info("Critical point scan finished",
                extra={"knob": knob.value, "samples": samples,
                       "min_gap": best.gap, "min_gap_at": best.knob_value})
    return points


def minimum_gap(points: Sequence[ScanPoint]) -> ScanPoint:
    """Scan point with the smallest gap (first one on ties)"""
    if not points:
        raise InvalidParameterError("points cannot be empty")
    return min(points, key=lambda point: point.gap)


def refine_crossing(p_base: HamiltonianParams, knob: ControlKnob,
                    lo: float, hi: float) -> Optional[float]:
    """Knob value of the smallest gap within [lo, hi] by bounded scalar minimization"""
    if hi <= lo:
        return None

    def gap_at(value: float) -> float:
        eigenvalues = np.linalg.eigvalsh(build_hamiltonian(with_control(p_base, knob, value)))
        return float(eigenvalues[1] - eigenvalues[0])

    result = scipy.optimize.minimize_scalar(gap_at, bounds=(lo, hi), method="bounded",
                                            options={"xatol": 1e-8})
    if not result.success:
        logger.warning("Gap minimization did not converge", extra={"knob": knob.value})
        return None
    return float(result.x)


def phase_point(p: HamiltonianParams,
                ghz_threshold: float = DEFAULT_GHZ_THRESHOLD,
                product_tol: float = DEFAULT_PRODUCT_TOL,
                degeneracy_tol: float = DEFAULT_DEGENERACY_TOL) -> PhasePoint:
    """Classification and spectral data of one parameter set"""
    report = ground_state_report(p, degeneracy_tol)
    label = classify_phase(report, p, ghz_threshold, product_tol)
    tangle = float("nan") if report.is_degenerate else three_tangle(report.ground_state)
    return PhasePoint(j2=p.j2, j3=p.j3, energy=report.energy, gap=report.gap,
                      degeneracy=report.degeneracy, tangle=tangle, label=label)


def crossing_location(points: Sequence[ScanPoint], p_base: HamiltonianParams,
                      knob: ControlKnob) -> float:
    """
    Minimum-gap knob value, refined between the neighbours of the best sample
    """
    if not points:
        raise InvalidParameterError("points cannot be empty")
    best_index = min(range(len(points)), key=lambda k: points[k].gap)
    lo = points[max(best_index - 1, 0)].knob_value
    hi = points[min(best_index + 1, len(points) - 1)].knob_value
    refined = refine_crossing(p_base, knob, lo, hi)
    return points[best_index].knob_value if refined is None else refined


def phase_grid(p_base: HamiltonianParams, j2_values: Sequence[float], j3_values: Sequence[float],
               ghz_threshold: float = DEFAULT_GHZ_THRESHOLD,
               product_tol: float = DEFAULT_PRODUCT_TOL,
               degeneracy_tol: float = DEFAULT_DEGENERACY_TOL) -> List[PhasePoint]:
    """Regime map over (J2, J3), rows ordered by J2 then J3"""
    if len(j2_values) == 0 or len(j3_values) == 0:
        raise InvalidParameterError("grid axes cannot be empty")
    grid = []
    for j2 in j2_values:
        for j3 in j3_values:
            p = with_control(with_control(p_base, ControlKnob.J2, float(j2)), ControlKnob.J3, float(j3))
            grid.append(phase_point(p, ghz_threshold, product_tol, degeneracy_tol))
    return grid
