# tests/test_spin_algebra.py
"""
Unit tests for the dense spin operator layer
"""
import numpy as np
import pytest
import scipy.linalg
from numpy.testing import assert_allclose

from src.physics.spin_algebra import (
    DOWN, PAULI, UP, basis_state, check_density_matrix, check_state_vector,
    cyclic_shift_operator, density_from_state, hermitian_eigensystem, kron_all,
    n_spins_for_dim, partial_trace_keep, pauli_on_site, pauli_string, product_state, purity,
    random_density_matrix, random_product_state, single_spin_rotation, unitary_exp, z_signs,
    zz_rotation,
)
from src.utils.error_handler import InvalidParameterError


class TestPauliOnSite:
    """Test cases for site-embedded Pauli operators"""

    def test_single_spin_z(self):
        """Test Z on a one-spin system"""
        assert_allclose(pauli_on_site("Z", 1, 1), np.diag([1, -1]))

    def test_x_on_second_of_two(self):
        """Test I x X pattern"""
        op = pauli_on_site("X", 2, 2)
        assert op[0, 1] == 1
        assert_allclose(op, np.kron(np.eye(2), PAULI["X"]))

    def test_z_on_middle_spin_diagonal(self):
        """Test spin ordering: spin 1 is the most significant bit"""
        assert_allclose(np.diag(pauli_on_site("Z", 2, 3)).real, [1, 1, -1, -1, 1, 1, -1, -1])

    @pytest.mark.parametrize("which", ["X", "Y", "Z"])
    def test_squares_to_identity_and_traceless(self, which):
        """Test P^2 = I and tr P = 0"""
        for site in (1, 2, 3):
            op = pauli_on_site(which, site, 3)
            assert_allclose(op @ op, np.eye(8), atol=1e-12)
            assert abs(np.trace(op)) < 1e-12

    def test_same_site_anticommute_different_sites_commute(self):
        """Test {X_i, Z_i} = 0 and [X_i, Z_j] = 0"""
        x1, z1, z2 = pauli_on_site("X", 1, 3), pauli_on_site("Z", 1, 3), pauli_on_site("Z", 2, 3)
        assert np.max(np.abs(x1 @ z1 + z1 @ x1)) <= 1e-12
        assert np.max(np.abs(x1 @ z2 - z2 @ x1)) <= 1e-12

    def test_site_out_of_range(self):
        """Test site validation"""
        with pytest.raises(InvalidParameterError, match="site must be between 1 and 3"):
            pauli_on_site("X", 4, 3)

    def test_dense_cap(self):
        """Test that chains beyond the dense cap are refused"""
        with pytest.raises(InvalidParameterError, match="n_spins must be between 1 and 12"):
            pauli_on_site("Z", 1, 13)

    def test_unknown_pauli(self):
        with pytest.raises(InvalidParameterError, match="which must be one of"):
            pauli_on_site("Q", 1, 2)

    def test_pauli_string_matches_product(self):
        """Test that a Pauli string equals the product of site operators"""
        expected = pauli_on_site("X", 1, 3) @ pauli_on_site("X", 3, 3)
        assert_allclose(pauli_string("X", [1, 3], 3), expected)

    def test_pauli_string_requires_distinct_sites(self):
        with pytest.raises(InvalidParameterError, match="sites must be distinct"):
            pauli_string("Z", [2, 2], 3)

    def test_z_signs(self):
        signs = z_signs(2)
        assert signs.tolist() == [[1, 1, -1, -1], [1, -1, 1, -1]]


class TestEigensystem:
    """Test cases for the Hermitian eigensolver and exponential"""

    def test_diagonal_input(self):
        """Test ascending eigenvalues of a diagonal matrix"""
        values, _ = hermitian_eigensystem(np.diag([3.0, 1.0, -1.0, -3.0]))
        assert_allclose(values, [-3, -1, 1, 3])

    def test_sigma_x(self):
        """Test Pauli X spectrum and eigenvectors up to phase"""
        values, vectors = hermitian_eigensystem(PAULI["X"])
        assert_allclose(values, [-1, 1])
        assert abs(abs(np.vdot(vectors[:, 0], (UP - DOWN) / np.sqrt(2))) - 1) < 1e-12
        assert abs(abs(np.vdot(vectors[:, 1], (UP + DOWN) / np.sqrt(2))) - 1) < 1e-12

    def test_field_only_chain_ground_energy(self):
        """Test -3 sqrt(wz^2 + wx^2) for three independent spins"""
        H = sum(-2.0 * pauli_on_site("Z", s, 3) + 0.09 * pauli_on_site("X", s, 3) for s in (1, 2, 3))
        values, _ = hermitian_eigensystem(H)
        assert values[0] == pytest.approx(-3 * np.hypot(2.0, 0.09), abs=1e-10)
        assert values[0] == pytest.approx(-6.00607, abs=1e-5)

    def test_reconstruction(self, rng):
        """Test V diag(l) V^dagger = A"""
        g = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
        A = g + g.conj().T
        values, vectors = hermitian_eigensystem(A)
        assert_allclose((vectors * values) @ vectors.conj().T, A, atol=1e-9 * np.max(np.abs(values)))
        assert_allclose(vectors.conj().T @ vectors, np.eye(8), atol=1e-9)

    def test_non_hermitian_rejected(self):
        with pytest.raises(InvalidParameterError, match="not Hermitian"):
            hermitian_eigensystem(np.array([[0, 1], [0, 0]], dtype=complex))

    def test_exp_zero_time_is_identity(self):
        assert_allclose(unitary_exp(PAULI["Y"], 0.0), np.eye(2), atol=1e-12)

    def test_exp_sigma_z(self):
        assert_allclose(unitary_exp(PAULI["Z"], np.pi / 2),
                        np.diag([np.exp(-1j * np.pi / 2), np.exp(1j * np.pi / 2)]), atol=1e-12)

    def test_exp_sigma_x(self):
        expected = np.cos(np.pi / 4) * np.eye(2) - 1j * np.sin(np.pi / 4) * PAULI["X"]
        assert_allclose(unitary_exp(PAULI["X"], np.pi / 4), expected, atol=1e-12)

    def test_exp_inverse_and_expm_agreement(self, rng):
        """Test U(t) U(-t) = I and agreement with scipy.linalg.expm"""
        g = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
        A = (g + g.conj().T) / 2
        U = unitary_exp(A, 0.7)
        assert_allclose(U @ unitary_exp(A, -0.7), np.eye(8), atol=1e-9)
        assert_allclose(U, scipy.linalg.expm(-0.7j * A), atol=1e-9)


class TestStates:
    """Test cases for state construction and validation"""

    def test_basis_state_index(self):
        psi = basis_state([1, 0, 0])
        assert psi[4] == 1 and np.count_nonzero(psi) == 1

    def test_basis_state_bits_validated(self):
        with pytest.raises(InvalidParameterError, match="bits must be 0 or 1"):
            basis_state([0, 2])

    def test_product_state(self):
        assert_allclose(product_state([UP, DOWN]), kron_all([UP, DOWN]))

    def test_check_state_vector_norm(self):
        with pytest.raises(InvalidParameterError, match="must be normalized"):
            check_state_vector(np.array([1.0, 1.0]))

    def test_n_spins_for_dim(self):
        assert n_spins_for_dim(8) == 3
        with pytest.raises(InvalidParameterError, match="power of two"):
            n_spins_for_dim(6)

    def test_random_density_matrix_is_valid(self, rng):
        rho = random_density_matrix(rng, 3)
        check_density_matrix(rho)
        assert purity(rho) < 1.0

    def test_check_density_matrix_trace(self):
        with pytest.raises(InvalidParameterError, match="trace must be 1"):
            check_density_matrix(np.eye(2, dtype=complex))

    def test_purity_of_pure_state(self, rng):
        assert purity(density_from_state(random_product_state(rng, 3))) == pytest.approx(1.0)

    def test_partial_trace_of_product(self, rng):
        """Test that tracing out a product factor leaves the other factor"""
        a, b = random_product_state(rng, 1), random_product_state(rng, 2)
        rho = density_from_state(np.kron(a, b))
        assert_allclose(partial_trace_keep(rho, [1], 3), density_from_state(a), atol=1e-12)
        assert_allclose(partial_trace_keep(rho, [2, 3], 3), density_from_state(b), atol=1e-12)


class TestRotations:
    """Test cases for rotation and permutation helpers"""

    def test_pi_rotation_about_x_flips(self):
        U = single_spin_rotation("x", np.pi, 1, 1)
        assert abs(abs(np.vdot(DOWN, U @ UP)) - 1) < 1e-12

    def test_zz_rotation_matches_exponential(self):
        zz = pauli_on_site("Z", 1, 3) @ pauli_on_site("Z", 3, 3)
        assert_allclose(zz_rotation(1, 3, 0.3, 3), scipy.linalg.expm(-0.3j * zz), atol=1e-12)

    def test_zz_rotation_distinct_sites(self):
        with pytest.raises(InvalidParameterError, match="two distinct sites"):
            zz_rotation(2, 2, 0.1, 3)

    def test_cyclic_shift(self):
        """Test |s1 s2 s3> -> |s3 s1 s2>"""
        shift = cyclic_shift_operator(3)
        assert_allclose(shift @ basis_state([0, 0, 1]), basis_state([1, 0, 0]))
        assert_allclose(np.linalg.matrix_power(shift, 3), np.eye(8))
