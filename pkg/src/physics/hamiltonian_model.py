# src/physics/hamiltonian_model.py
"""
Ising chain Hamiltonian with one-, two- and three-body terms

H = wz sum sz_i + wx sum sx_i + J2 sum sz_i sz_(i+1) + J3 sum sz_i sz_(i+1) sz_(i+2)

Sums wrap around when the chain is periodic. For a periodic 3-spin ring the
three wrapped triples coincide and the literal sum gives 3 * sz sz sz.
"""
import logging
from dataclasses import replace
from typing import Dict, List, Tuple

import numpy as np

from src.models.data_models import ControlKnob, HamiltonianParams
from src.physics.spin_algebra import (
    basis_state, pauli_on_site, product_state, z_signs, MINUS,
)

logger = logging.getLogger(__name__)


def bonds(p: HamiltonianParams) -> List[Tuple[int, int]]:
    """Nearest-neighbour pairs (1-based); periodic chains wrap N -> 1"""
    n = p.n_spins
    pairs = [(i, i + 1) for i in range(1, n)]
    if p.periodic and n > 2:
        pairs.append((n, 1))
    return pairs


def triples(p: HamiltonianParams) -> List[Tuple[int, int, int]]:
    """Consecutive triples (1-based); periodic chains wrap"""
    n = p.n_spins
    if n < 3:
        return []
    count = n if p.periodic else n - 2
    return [tuple(((i + k) % n) + 1 for k in range(3)) for i in range(count)]


def z_diagonal(p: HamiltonianParams) -> np.ndarray:
    """Diagonal of Hz in the computational basis"""
    signs = z_signs(p.n_spins).astype(float)
    diag = p.omega_z * signs.sum(axis=0)
    for a, b in bonds(p):
        diag = diag + p.j2 * signs[a - 1] * signs[b - 1]
    for a, b, c in triples(p):
        diag = diag + p.j3 * signs[a - 1] * signs[b - 1] * signs[c - 1]
    return diag


def transverse_term(p: HamiltonianParams) -> np.ndarray:
    """Hx = wx sum sx_i"""
    hx = np.zeros((p.dim, p.dim), dtype=complex)
    if p.omega_x != 0:
        for site in range(1, p.n_spins + 1):
            hx += pauli_on_site("X", site, p.n_spins)
        hx *= p.omega_x
    return hx


def split_xz(p: HamiltonianParams) -> Tuple[np.ndarray, np.ndarray]:
    """
    Transverse part Hx and the mutually commuting z-type remainder Hz = H - Hx

    Hz is diagonal in the computational basis for every parameter value.
    """
    return transverse_term(p), np.diag(z_diagonal(p)).astype(complex)


def build_hamiltonian(p: HamiltonianParams) -> np.ndarray:
    hx, hz = split_xz(p)
    return hx + hz


def z_terms(p: HamiltonianParams) -> List[np.ndarray]:
    """Every individual z-type term of Hz as a diagonal matrix"""
    signs = z_signs(p.n_spins).astype(float)
    terms = [p.omega_z * np.diag(signs[i]) for i in range(p.n_spins)]
    terms += [p.j2 * np.diag(signs[a - 1] * signs[b - 1]) for a, b in bonds(p)]
    terms += [p.j3 * np.diag(signs[a - 1] * signs[b - 1] * signs[c - 1]) for a, b, c in triples(p)]
    return [t.astype(complex) for t in terms]


def with_control(p: HamiltonianParams, knob: ControlKnob, value: float) -> HamiltonianParams:
    """Copy of p with the scanned coupling set to value"""
    if knob == ControlKnob.J2:
        return replace(p, j2=value)
    return replace(p, j3=value)


def exemplar_states(n_spins: int = 3) -> Dict[str, np.ndarray]:
    """
    Reference three-spin states used by witnesses and classification tests

    w:     single down spin, (|duu> + |udu> + |uud>)/sqrt(3)
    w_bar: single up spin, (|udd> + |dud> + |ddu>)/sqrt(3)
    """
    up = basis_state([0] * n_spins)
    down = basis_state([1] * n_spins)
    w = sum(basis_state([1 if k == i else 0 for k in range(n_spins)]) for i in range(n_spins))
    w_bar = sum(basis_state([0 if k == i else 1 for k in range(n_spins)]) for i in range(n_spins))
    return {
        "ghz_plus": (up + down) / np.sqrt(2),
        "ghz_minus": (up - down) / np.sqrt(2),
        "w": w / np.sqrt(n_spins),
        "w_bar": w_bar / np.sqrt(n_spins),
        "all_left": product_state([MINUS] * n_spins),
    }
