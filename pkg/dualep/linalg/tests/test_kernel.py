import numpy as np
import pytest

from dualep.linalg.kernel import DimensionError
from dualep.linalg.kernel import NotHermitianError
from dualep.linalg.kernel import apply_two_site
from dualep.linalg.kernel import expm_minus_i
from dualep.linalg.kernel import kron
from dualep.linalg.kernel import partial_trace
from dualep.linalg.kernel import unitarity_residual
from dualep.linalg.pauli import IDENTITY
from dualep.linalg.pauli import SIGMA_X
from dualep.linalg.pauli import SIGMA_Y
from dualep.linalg.pauli import SIGMA_Z

SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]],
    dtype=np.complex128,
)


def _random_matrix(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


class TestKron:
    """Tests for the Kronecker product ordering."""

    def test_identity(self):
        """Identity times identity is the 4x4 identity."""
        assert np.allclose(kron(IDENTITY, IDENTITY), np.eye(4))

    def test_xx_is_antidiagonal(self):
        """X⊗X has ones on the anti-diagonal."""
        assert np.allclose(kron(SIGMA_X, SIGMA_X), np.fliplr(np.eye(4)))

    def test_left_factor_is_site_one(self):
        """Z⊗Y puts Z on the most significant index, giving -i at [0][1]."""
        assert kron(SIGMA_Z, SIGMA_Y)[0, 1] == pytest.approx(-1j)


class TestExpmMinusI:
    """Tests for exp(-iH) by eigendecomposition."""

    def test_zero_generator(self):
        """exp(0) is the identity."""
        assert np.allclose(expm_minus_i(np.zeros((4, 4))), np.eye(4))

    def test_pi_sigma_z(self):
        """exp(-iπZ) = -1."""
        assert np.allclose(expm_minus_i(np.pi * SIGMA_Z), -IDENTITY, atol=1e-14)

    def test_heisenberg_bond_is_swap_up_to_phase(self):
        """exp(-iπ/4 (XX+YY+ZZ)) equals e^{-iπ/4} SWAP."""
        h = np.pi / 4 * (
            kron(SIGMA_X, SIGMA_X) + kron(SIGMA_Y, SIGMA_Y) + kron(SIGMA_Z, SIGMA_Z)
        )
        result = expm_minus_i(h)
        phase = result[0, 0]
        assert abs(abs(phase) - 1) < 1e-12
        assert np.max(np.abs(result / phase - SWAP)) < 1e-12

    def test_unitary_for_random_hermitian(self, rng):
        """Random Hermitian generators with norm <= 10 give unitaries to 1e-12."""
        for _ in range(20):
            a = _random_matrix(rng, 4)
            h = a + a.conj().T
            h *= 10 / np.linalg.norm(h, 2)
            assert unitarity_residual(expm_minus_i(h)) < 1e-12

    def test_rejects_non_hermitian(self):
        """A non-Hermitian generator raises."""
        with pytest.raises(NotHermitianError, match="not Hermitian"):
            expm_minus_i(np.array([[0, 1], [0, 0]]))

    def test_rejects_non_square(self):
        """A rectangular generator raises."""
        with pytest.raises(DimensionError):
            expm_minus_i(np.zeros((2, 3)))


class TestPartialTrace:
    """Tests for the two-qubit partial trace."""

    def test_product_factorizes(self, rng):
        """tr_1(A⊗B) = tr(A) B for random A, B."""
        a, b = _random_matrix(rng, 2), _random_matrix(rng, 2)
        assert np.max(np.abs(partial_trace(kron(a, b), 1) - np.trace(a) * b)) < 1e-14

    def test_second_site(self, rng):
        """tr_2(A⊗B) = tr(B) A."""
        a, b = _random_matrix(rng, 2), _random_matrix(rng, 2)
        assert np.allclose(partial_trace(kron(a, b), 2), np.trace(b) * a)

    def test_identity(self):
        """tr_2 of the 4x4 identity is twice the 2x2 identity."""
        assert np.allclose(partial_trace(np.eye(4), 2), 2 * IDENTITY)

    def test_swap(self):
        """tr_1 SWAP is the identity."""
        assert np.allclose(partial_trace(SWAP, 1), IDENTITY)

    def test_wrong_dims(self):
        """Non 4x4 input raises."""
        with pytest.raises(DimensionError):
            partial_trace(np.eye(2), 1)

    def test_wrong_site(self):
        """Only sites 1 and 2 exist."""
        with pytest.raises(DimensionError, match="1 or 2"):
            partial_trace(np.eye(4), 3)


class TestApplyTwoSite:
    """Tests for applying a gate inside a larger register."""

    def test_matches_kron_on_adjacent_sites(self, rng):
        """Acting on sites (1, 2) of three qubits equals 1⊗G."""
        gate = _random_matrix(rng, 4)
        full = kron(IDENTITY, gate)
        assert np.allclose(apply_two_site(gate, np.eye(8), (1, 2), 3), full)

    def test_reversed_sites(self, rng):
        """Acting on (1, 0) of two qubits equals SWAP G SWAP."""
        gate = _random_matrix(rng, 4)
        assert np.allclose(apply_two_site(gate, np.eye(4), (1, 0), 2), SWAP @ gate @ SWAP)
