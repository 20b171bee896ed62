# src/physics/spin_algebra.py
"""
Dense complex-matrix primitives for N spin-1/2 particles

Basis ordering is |s1 s2 ... sN> with spin 1 the most significant bit and
|up> = |0> the first basis state, so sigma_z |up> = +|up>.
"""
import logging
from functools import reduce
from typing import Iterable, List, Sequence, Tuple

import numpy as np
import scipy.linalg

from src.config.settings import HERMITIAN_TOL, MAX_DENSE_SPINS, NORM_TOL
from src.utils.error_handler import InvalidParameterError

logger = logging.getLogger(__name__)

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

UP = np.array([1, 0], dtype=complex)
DOWN = np.array([0, 1], dtype=complex)
PLUS = (UP + DOWN) / np.sqrt(2)
MINUS = (UP - DOWN) / np.sqrt(2)


def _check_n_spins(n_spins: int) -> None:
    if not 1 <= n_spins <= MAX_DENSE_SPINS:
        raise InvalidParameterError(
            f"n_spins must be between 1 and {MAX_DENSE_SPINS}, got {n_spins}"
        )


def _check_site(site: int, n_spins: int) -> None:
    if not 1 <= site <= n_spins:
        raise InvalidParameterError(f"site must be between 1 and {n_spins}, got {site}")


def n_spins_for_dim(dim: int) -> int:
    """Number of spins of a 2^N dimensional space"""
    n = int(round(np.log2(dim))) if dim > 0 else -1
    if n < 1 or 2 ** n != dim:
        raise InvalidParameterError(f"dimension must be a power of two, got {dim}")
    return n


def kron_all(ops: Iterable[np.ndarray]) -> np.ndarray:
    """Kronecker product of the operators in order (first factor is spin 1)"""
    return reduce(np.kron, ops)


def pauli_on_site(which: str, site: int, n_spins: int) -> np.ndarray:
    """
    I x ... x sigma x ... x I with sigma at position `site` (1-based)

    Args:
        which: One of "I", "X", "Y", "Z"
        site: Spin index in 1..n_spins
        n_spins: Chain length
    """
    _check_n_spins(n_spins)
    _check_site(site, n_spins)
    key = which.upper()
    if key not in PAULI:
        raise InvalidParameterError(f"which must be one of I, X, Y, Z, got {which}")
    ops = [PAULI["I"]] * n_spins
    ops[site - 1] = PAULI[key]
    return kron_all(ops)


def pauli_string(which: str, sites: Sequence[int], n_spins: int) -> np.ndarray:
    """Product of the same Pauli on several distinct sites"""
    _check_n_spins(n_spins)
    if len(set(sites)) != len(sites):
        raise InvalidParameterError("sites must be distinct")
    ops = [PAULI["I"]] * n_spins
    for site in sites:
        _check_site(site, n_spins)
        ops[site - 1] = PAULI[which.upper()]
    return kron_all(ops)


def z_signs(n_spins: int) -> np.ndarray:
    """Array (n_spins, 2^n_spins) of sigma_z eigenvalues per site and basis state"""
    _check_n_spins(n_spins)
    index = np.arange(2 ** n_spins)
    bits = (index[None, :] >> (n_spins - 1 - np.arange(n_spins))[:, None]) & 1
    return 1 - 2 * bits


def is_hermitian(A: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    A = np.asarray(A)
    return A.ndim == 2 and A.shape[0] == A.shape[1] and np.max(np.abs(A - A.conj().T), initial=0.0) <= tol


def assert_hermitian(A: np.ndarray, tol: float = HERMITIAN_TOL) -> None:
    """Raise InvalidParameterError unless A is square and Hermitian within tol"""
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidParameterError(f"matrix must be square, got shape {A.shape}")
    deviation = float(np.max(np.abs(A - A.conj().T), initial=0.0))
    if deviation > tol:
        raise InvalidParameterError(f"matrix is not Hermitian (max deviation {deviation:.3e})")


def hermitian_eigensystem(A: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Eigenvalues in ascending order and orthonormal eigenvectors as columns
    """
    A = np.asarray(A, dtype=complex)
    # Tolerance scales with the matrix so large couplings are not rejected for rounding
    assert_hermitian(A, tol=max(HERMITIAN_TOL, HERMITIAN_TOL * float(np.max(np.abs(A), initial=0.0))))
    eigenvalues, eigenvectors = scipy.linalg.eigh(A)
    return eigenvalues, eigenvectors


def unitary_exp(A: np.ndarray, t: float) -> np.ndarray:
    """exp(-i A t) for Hermitian A, via its eigendecomposition"""
    eigenvalues, eigenvectors = hermitian_eigensystem(A)
    phases = np.exp(-1j * eigenvalues * t)
    return (eigenvectors * phases) @ eigenvectors.conj().T


def basis_state(bits: Sequence[int]) -> np.ndarray:
    """Computational basis vector; bits[0] is spin 1 and 0 means up"""
    n_spins = len(bits)
    _check_n_spins(n_spins)
    if any(b not in (0, 1) for b in bits):
        raise InvalidParameterError("bits must be 0 or 1")
    index = int("".join(str(b) for b in bits), 2)
    psi = np.zeros(2 ** n_spins, dtype=complex)
    psi[index] = 1.0
    return psi


def product_state(single_spin_states: Sequence[np.ndarray]) -> np.ndarray:
    """Tensor product of normalized single-spin vectors"""
    states = [np.asarray(s, dtype=complex) / np.linalg.norm(s) for s in single_spin_states]
    return kron_all(states)


def check_state_vector(psi: np.ndarray) -> np.ndarray:
    """Validate a normalized state vector and return it as a complex array"""
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1:
        raise InvalidParameterError("state vector must be one-dimensional")
    n_spins_for_dim(psi.shape[0])
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > NORM_TOL:
        raise InvalidParameterError(f"state vector must be normalized, norm is {norm:.12f}")
    return psi


def check_density_matrix(rho: np.ndarray, tol: float = NORM_TOL) -> np.ndarray:
    """Validate Hermiticity, unit trace and positivity of a density matrix"""
    rho = np.asarray(rho, dtype=complex)
    assert_hermitian(rho)
    n_spins_for_dim(rho.shape[0])
    trace = np.trace(rho).real
    if abs(trace - 1.0) > tol:
        raise InvalidParameterError(f"density matrix trace must be 1, got {trace:.12f}")
    min_eig = float(np.linalg.eigvalsh(rho).min())
    if min_eig < -tol:
        raise InvalidParameterError(f"density matrix must be positive, min eigenvalue {min_eig:.3e}")
    return rho


def density_from_state(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def purity(rho: np.ndarray) -> float:
    """tr(rho^2)"""
    rho = np.asarray(rho)
    return float(np.real(np.sum(rho * rho.T)))


def partial_trace_keep(rho: np.ndarray, keep: Sequence[int], n_spins: int) -> np.ndarray:
    """
    Reduced density matrix of the spins in `keep` (1-based, output in ascending order)
    """
    keep = sorted(set(keep))
    for site in keep:
        _check_site(site, n_spins)
    traced = [s for s in range(1, n_spins + 1) if s not in keep]
    tensor = np.asarray(rho).reshape([2] * (2 * n_spins))
    letters = "abcdefghijklmnopqrstuvwxyz"
    row = [letters[i] for i in range(n_spins)]
    col = [letters[n_spins + i] for i in range(n_spins)]
    for site in traced:
        col[site - 1] = row[site - 1]
    out = "".join(row[s - 1] for s in keep) + "".join(col[s - 1] for s in keep)
    reduced = np.einsum("".join(row) + "".join(col) + "->" + out, tensor)
    k = 2 ** len(keep)
    return reduced.reshape(k, k)


def single_spin_rotation(axis: str, angle: float, site: int, n_spins: int) -> np.ndarray:
    """exp(-i angle sigma_axis / 2) acting on one spin"""
    sigma = PAULI[axis.upper()]
    local = np.cos(angle / 2) * PAULI["I"] - 1j * np.sin(angle / 2) * sigma
    _check_n_spins(n_spins)
    _check_site(site, n_spins)
    ops = [PAULI["I"]] * n_spins
    ops[site - 1] = local
    return kron_all(ops)


def zz_rotation(site_a: int, site_b: int, angle: float, n_spins: int) -> np.ndarray:
    """exp(-i angle sz_a sz_b), diagonal"""
    if site_a == site_b:
        raise InvalidParameterError("zz_rotation needs two distinct sites")
    signs = z_signs(n_spins)
    _check_site(site_a, n_spins)
    _check_site(site_b, n_spins)
    return np.diag(np.exp(-1j * angle * signs[site_a - 1] * signs[site_b - 1]))


def hadamard_all(n_spins: int) -> np.ndarray:
    h = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    _check_n_spins(n_spins)
    return kron_all([h] * n_spins)


def cyclic_shift_operator(n_spins: int) -> np.ndarray:
    """Permutation |s1 s2 ... sN> -> |sN s1 ... s(N-1)>"""
    _check_n_spins(n_spins)
    dim = 2 ** n_spins
    shift = np.zeros((dim, dim), dtype=complex)
    for index in range(dim):
        low = index & 1
        target = (index >> 1) | (low << (n_spins - 1))
        shift[target, index] = 1.0
    return shift


def random_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-random pure state"""
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return psi / np.linalg.norm(psi)


def random_product_state(rng: np.random.Generator, n_spins: int) -> np.ndarray:
    return product_state([random_state(rng, 2) for _ in range(n_spins)])


def random_density_matrix(rng: np.random.Generator, n_spins: int, rank: int = None) -> np.ndarray:
    """Random mixed state from a Ginibre matrix of the given rank (full by default)"""
    dim = 2 ** n_spins
    rank = rank or dim
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def single_spin_states(psi: np.ndarray) -> List[np.ndarray]:
    """Reduced one-spin density matrices of a pure state, spin 1 first"""
    psi = check_state_vector(psi)
    n_spins = n_spins_for_dim(psi.shape[0])
    rho = density_from_state(psi)
    return [partial_trace_keep(rho, [site], n_spins) for site in range(1, n_spins + 1)]
