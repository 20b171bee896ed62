# src/physics/observables.py
"""
Detection layer: two-spin correlations, projector witnesses, fidelities and
signal-decay rescaling
"""
import logging
from itertools import combinations
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from src.models.data_models import CorrelationReport, WitnessOperator
from src.physics.hamiltonian_model import exemplar_states
from src.physics.spin_algebra import (
    hadamard_all, n_spins_for_dim, pauli_string, purity,
)
from src.utils.error_handler import InvalidParameterError

logger = logging.getLogger(__name__)

W_OFFSET = 2.0 / 3.0
GHZ_OFFSET = 3.0 / 4.0


def _check_dim(rho: np.ndarray, dim: int) -> None:
    if rho.shape != (dim, dim):
        raise InvalidParameterError(f"dimension mismatch: expected {dim}x{dim}, got {rho.shape}")


def _pair_correlations(rho: np.ndarray, which: str) -> CorrelationReport:
    rho = np.asarray(rho, dtype=complex)
    _check_dim(rho, 8)
    pairwise = {}
    for a, b in combinations(range(1, 4), 2):
        operator = pauli_string(which, [a, b], 3)
        pairwise[(a, b)] = float(np.real(np.trace(rho @ operator)))
    total = sum(pairwise.values())
    return CorrelationReport(pairwise=pairwise, c_xx=total / 3.0, c_xx_ordered_sum=2.0 * total / 3.0)


def correlation_xx(rho: np.ndarray) -> CorrelationReport:
    """
    <sx_i sx_j> for the three unordered pairs and their mean C_xx

    c_xx_ordered_sum keeps the (1/3) * sum over ordered pairs for comparison.
    """
    return _pair_correlations(rho, "X")


def correlation_zz(rho: np.ndarray) -> CorrelationReport:
    """Same as correlation_xx for sz_i sz_j; c_xx holds the zz mean"""
    return _pair_correlations(rho, "Z")


def ghz_witness(sign: int = -1, frame: str = "z") -> WitnessOperator:
    """3/4 - |GHZ><GHZ|, optionally rotated into the x frame by Hadamards"""
    states = exemplar_states(3)
    psi = states["ghz_minus"] if sign < 0 else states["ghz_plus"]
    if frame == "x":
        psi = hadamard_all(3) @ psi
    elif frame != "z":
        raise InvalidParameterError("frame must be 'z' or 'x'")
    label = f"GHZ{'-' if sign < 0 else '+'}[{frame}]"
    return WitnessOperator(offset=GHZ_OFFSET, reference_state=psi, label=label)


def w_witness(flip: bool = False) -> WitnessOperator:
    """2/3 - |W><W| with one down spin (or one up spin when flipped)"""
    states = exemplar_states(3)
    psi = states["w_bar"] if flip else states["w"]
    return WitnessOperator(offset=W_OFFSET, reference_state=psi,
                           label="W[single-up]" if flip else "W[single-down]")


def witness_candidates(kind: str) -> List[WitnessOperator]:
    """Frame and sign variants a witness reference may need to match a scan endpoint"""
    if kind == "w":
        return [w_witness(False), w_witness(True)]
    if kind == "ghz":
        return [ghz_witness(sign, frame) for frame in ("z", "x") for sign in (-1, 1)]
    raise InvalidParameterError("kind must be 'w' or 'ghz'")


def align_witness(target: np.ndarray, candidates: Sequence[WitnessOperator]) -> WitnessOperator:
    """Candidate whose reference state overlaps the target state most (first on ties)"""
    if not candidates:
        raise InvalidParameterError("candidates cannot be empty")
    target = np.asarray(target, dtype=complex)
    overlaps = [abs(np.vdot(w.reference_state, target)) ** 2 for w in candidates]
    best = candidates[int(np.argmax(overlaps))]
    logger.debug("Aligned witness", extra={"witness": best.label, "overlap": float(max(overlaps))})
    return best


def witness_expectation(rho: np.ndarray, w: WitnessOperator) -> float:
    """tr(rho W) = offset - <psi|rho|psi>"""
    rho = np.asarray(rho, dtype=complex)
    _check_dim(rho, w.dim)
    psi = w.reference_state
    return float(w.offset - np.real(np.vdot(psi, rho @ psi)))


def householder_to_first_basis(psi: np.ndarray) -> np.ndarray:
    """
    Unitary reflection U with U psi = alpha |0>, |alpha| = 1
    """
    x = np.asarray(psi, dtype=complex)
    x0 = x[0]
    phase = x0 / abs(x0) if abs(x0) > 0 else 1.0
    alpha = -phase
    v = x.copy()
    v[0] -= alpha
    return np.eye(x.shape[0], dtype=complex) - 2.0 * np.outer(v, v.conj()) / np.vdot(v, v).real


def measure_witness_projectively(rho: np.ndarray, w: WitnessOperator) -> float:
    """
    Witness value read as a population: rotate the reference state onto |0>,
    drop all coherences and read the |0> population
    """
    rho = np.asarray(rho, dtype=complex)
    _check_dim(rho, w.dim)
    U = householder_to_first_basis(w.reference_state)
    rotated = U @ rho @ U.conj().T
    dephased = np.diag(np.real(np.diag(rotated)))
    return float(w.offset - dephased[0, 0])


def fidelity(rho: np.ndarray, psi: np.ndarray) -> float:
    """|<psi|rho|psi>|"""
    rho = np.asarray(rho, dtype=complex)
    psi = np.asarray(psi, dtype=complex)
    _check_dim(rho, psi.shape[0])
    return float(abs(np.vdot(psi, rho @ psi)))


def experimental_fidelity(rho: np.ndarray, psi: np.ndarray) -> float:
    """|<psi|rho|psi>| / tr(rho^2); insensitive to uniform mixing, may exceed 1"""
    value = purity(rho)
    if value <= 0:
        raise InvalidParameterError("purity must be positive")
    return fidelity(rho, psi) / value


def effective_polarization(rho: np.ndarray) -> float:
    """
    Weight lambda of rho = lambda*pure + (1-lambda)*I/d that matches tr(rho^2)
    """
    dim = np.asarray(rho).shape[0]
    return float(np.sqrt(max(0.0, (dim * purity(rho) - 1.0) / (dim - 1.0))))


def fit_decay_envelope(steps: Sequence[float], norms: Sequence[float]) -> np.ndarray:
    """
    Single-exponential envelope fitted to the norm series, equal to 1 at the
    first step; all ones when the fit is unusable
    """
    steps = np.asarray(steps, dtype=float)
    norms = np.asarray(norms, dtype=float)
    if steps.shape != norms.shape:
        raise InvalidParameterError("steps and norms must have matching lengths")
    if np.any(norms <= 0):
        raise InvalidParameterError("norm values must be positive")
    if steps.size < 2 or np.ptp(steps) == 0:
        logger.warning("Decay fit needs at least two distinct steps; skipping rescale")
        return np.ones_like(norms)
    try:
        slope, _ = np.polyfit(steps, np.log(norms), 1)
    except (np.linalg.LinAlgError, ValueError) as e:
        logger.warning(f"Decay fit failed: {e}; skipping rescale")
        return np.ones_like(norms)
    if not np.isfinite(slope) or slope > 0:
        logger.warning("Norm series does not decay; skipping rescale", extra={"slope": float(slope)})
        return np.ones_like(norms)
    return np.exp(slope * (steps - steps[0]))


def rescale_decay(series: Sequence[Tuple[float, float]],
                  norm_series: Sequence[Tuple[float, float]]) -> List[Tuple[float, float]]:
    """
    Divide (step, value) pairs by an exponential fitted to (step, norm) pairs
    """
    if len(series) != len(norm_series):
        raise InvalidParameterError("series and norm_series must have matching lengths")
    if not series:
        return []
    steps = [s for s, _ in norm_series]
    envelope = fit_decay_envelope(steps, [n for _, n in norm_series])
    return [(step, value / env) for (step, value), env in zip(series, envelope)]


def rescale_population(steps: Sequence[float], populations: Sequence[float],
                       norms: Sequence[float], dim: int) -> np.ndarray:
    """
    Rescale populations about the maximally mixed baseline 1/dim

    Only the deviation p - 1/dim decays with the signal.
    """
    baseline = 1.0 / dim
    deviation = [(s, p - baseline) for s, p in zip(steps, populations)]
    rescaled = rescale_decay(deviation, list(zip(steps, norms)))
    return np.array([value + baseline for _, value in rescaled])


def witness_to_dict(w: WitnessOperator) -> Dict[str, Any]:
    """Offset and reference amplitudes as [re, im] pairs"""
    return {
        'label': w.label,
        'offset': w.offset,
        'reference_state': [[float(a.real), float(a.imag)] for a in w.reference_state]
    }


def witness_from_dict(data: Dict[str, Any]) -> WitnessOperator:
    amplitudes = np.array([complex(re, im) for re, im in data['reference_state']])
    n_spins_for_dim(amplitudes.shape[0])
    return WitnessOperator(offset=float(data['offset']), reference_state=amplitudes,
                           label=data.get('label', ''))
