"""Matrix helper tests: frozen examples plus randomized algebraic properties."""

import numpy as np
import pytest

from cst import qmath
from cst.model import pauli


def random_matrix(rng, n=2):
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


def random_ket(rng, n=2):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


class TestMatmul:
    def test_identity(self):
        np.testing.assert_array_equal(qmath.matmul(np.eye(2), pauli(1)), pauli(1))

    def test_pauli_involution(self):
        np.testing.assert_allclose(qmath.matmul(pauli(1), pauli(1)), np.eye(2))

    def test_xy_gives_i_z(self):
        np.testing.assert_allclose(qmath.matmul(pauli(1), pauli(2)), 1j * pauli(3))

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError, match="mismatch"):
            qmath.matmul(np.eye(2), np.eye(3))

    def test_non_2d_rejected(self):
        with pytest.raises(ValueError):
            qmath.matmul(np.ones(2), np.eye(2))


class TestKron:
    def test_identity_square(self):
        np.testing.assert_array_equal(qmath.kron(np.eye(2), np.eye(2)), np.eye(4))

    def test_z_with_projector(self):
        got = qmath.kron(pauli(3), np.diag([1.0, 0.0]))
        np.testing.assert_allclose(got, np.diag([1.0, 0.0, -1.0, 0.0]))

    def test_ket_kron_gives_basis_vector(self):
        got = qmath.kron(np.array([1.0, 0.0]), np.array([0.0, 1.0]))
        np.testing.assert_array_equal(got, np.array([0, 1, 0, 0], dtype=complex))

    def test_trace_multiplicative(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            a, b = random_matrix(rng), random_matrix(rng, 3)
            assert abs(qmath.trace(qmath.kron(a, b))
                       - qmath.trace(a) * qmath.trace(b)) < 1e-12


class TestDagger:
    def test_hermitian_fixed_point(self):
        np.testing.assert_array_equal(qmath.dagger(pauli(2)), pauli(2))

    def test_phase_conjugated(self):
        np.testing.assert_array_equal(qmath.dagger(1j * pauli(2)), -1j * pauli(2))

    def test_ketbra_transposed(self):
        ketbra = np.array([[0, 1], [0, 0]], dtype=complex)  # |0><1|
        np.testing.assert_array_equal(qmath.dagger(ketbra), ketbra.T)

    def test_involution_exact(self):
        rng = np.random.default_rng(3)
        a = random_matrix(rng)
        np.testing.assert_array_equal(qmath.dagger(qmath.dagger(a)), a)


class TestTrace:
    def test_identity(self):
        assert qmath.trace(np.eye(4)) == 4

    def test_pauli_traceless(self):
        assert qmath.trace(pauli(1)) == 0

    def test_projector_unit_trace(self):
        rng = np.random.default_rng(5)
        k = random_ket(rng)
        assert abs(qmath.trace(np.outer(k, k.conj())) - 1) < 1e-12

    def test_non_square_rejected(self):
        with pytest.raises(ValueError, match="square"):
            qmath.trace(np.ones((2, 3)))

    def test_cyclic(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            a, b = random_matrix(rng), random_matrix(rng)
            assert abs(qmath.trace(a @ b) - qmath.trace(b @ a)) < 1e-12


class TestInnerProjectControl:
    def test_matching_control_recovers_system(self):
        rho = np.array([[0.25, 0.1j], [-0.1j, 0.75]])
        big = np.kron(rho, np.diag([1.0, 0.0]))
        np.testing.assert_allclose(
            qmath.inner_project_control(big, [1.0, 0.0]), rho)

    def test_orthogonal_control_gives_zero(self):
        rho = np.array([[0.25, 0.1j], [-0.1j, 0.75]])
        big = np.kron(rho, np.diag([1.0, 0.0]))
        np.testing.assert_allclose(
            qmath.inner_project_control(big, [0.0, 1.0]), np.zeros((2, 2)))

    def test_plus_control(self):
        rho = np.array([[0.25, 0.1j], [-0.1j, 0.75]])
        plus = np.array([1.0, 1.0]) / np.sqrt(2)
        big = np.kron(rho, np.outer(plus, plus))
        np.testing.assert_allclose(qmath.inner_project_control(big, plus), rho,
                                   atol=1e-14)

    def test_non_unit_ket_rejected(self):
        with pytest.raises(ValueError, match="unit"):
            qmath.inner_project_control(np.eye(4), [1.0, 1.0])

    def test_linear_in_operator(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            x, y = random_matrix(rng, 4), random_matrix(rng, 4)
            m = random_ket(rng)
            lhs = qmath.inner_project_control(2.0 * x + 3.0 * y, m)
            rhs = (2.0 * qmath.inner_project_control(x, m)
                   + 3.0 * qmath.inner_project_control(y, m))
            np.testing.assert_allclose(lhs, rhs, atol=1e-12)


class TestPtraceControl:
    def test_product_state(self):
        rho = np.array([[0.25, 0.1j], [-0.1j, 0.75]])
        sigma = np.array([[0.5, 0.2], [0.2, 0.5]])
        np.testing.assert_allclose(qmath.ptrace_control(np.kron(rho, sigma)), rho,
                                   atol=1e-14)

    def test_matches_basis_projections(self):
        rng = np.random.default_rng(17)
        big = random_matrix(rng, 4)
        expected = (qmath.inner_project_control(big, [1.0, 0.0])
                    + qmath.inner_project_control(big, [0.0, 1.0]))
        np.testing.assert_allclose(qmath.ptrace_control(big), expected, atol=1e-14)


class TestChecks:
    def test_is_hermitian(self):
        assert qmath.is_hermitian(pauli(2))
        assert not qmath.is_hermitian(1j * pauli(2))

    def test_check_density_accepts_valid(self):
        qmath.check_density(np.diag([0.3, 0.7]))

    @pytest.mark.parametrize("bad", [
        np.diag([0.3, 0.8]),                    # trace != 1
        np.array([[0.5, 0.3], [0.1, 0.5]]),     # not Hermitian
        np.eye(4) / 4,                          # wrong shape
    ])
    def test_check_density_rejects(self, bad):
        with pytest.raises(ValueError):
            qmath.check_density(bad)

    def test_min_eigenvalue(self):
        assert qmath.min_eigenvalue(np.diag([0.2, 0.8])) == pytest.approx(0.2)

    def test_cmatrix_rejects_ragged_shape(self):
        with pytest.raises(ValueError):
            qmath.cmatrix([1.0, 2.0])
