"""Pauli basis in the order (1, x, y, z)."""

from enum import IntEnum

import numpy as np

from dualep.linalg.kernel import CMat
from dualep.linalg.kernel import as_cmat
from dualep.linalg.kernel import kron
from dualep.linalg.kernel import require_shape

IDENTITY = np.eye(2, dtype=np.complex128)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)

PAULIS: tuple[CMat, CMat, CMat, CMat] = (IDENTITY, SIGMA_X, SIGMA_Y, SIGMA_Z)


class PauliIndex(IntEnum):
    I = 0  # noqa: E741
    X = 1
    Y = 2
    Z = 3

    @classmethod
    def parse(cls, value: "str | int | PauliIndex") -> "PauliIndex":
        """
        Accept ``"x"``, ``"Z"``, ``"i"``, ``"3"``, ``3`` or a member.

        Raises:
            ValueError: If the value names no Pauli
        """
        if isinstance(value, str):
            key = value.strip().lower()
            aliases = {"i": 0, "x": 1, "y": 2, "z": 3, "0": 0, "1": 1, "2": 2, "3": 3}
            if key not in aliases:
                msg = f"Unknown Pauli label {value!r}; expected one of i, x, y, z"
                raise ValueError(msg)
            return cls(aliases[key])
        return cls(int(value))

    @property
    def label(self) -> str:
        return "ixyz"[self.value]

    @property
    def matrix(self) -> CMat:
        return PAULIS[self.value]


NONTRIVIAL = (PauliIndex.X, PauliIndex.Y, PauliIndex.Z)


def pauli_coeffs(m: CMat) -> CMat:
    """
    Decompose a 2x2 operator as ``sum_a c_a sigma_a``.

    Args:
        m: 2x2 complex matrix

    Returns:
        Four complex coefficients ``c_a = tr(sigma_a m) / 2``.
    """
    m = as_cmat(m)
    require_shape(m, (2, 2), "pauli_coeffs input")
    return np.array([np.trace(p @ m) / 2 for p in PAULIS], dtype=np.complex128)


def from_coeffs(coeffs: CMat) -> CMat:
    return np.einsum("a,aij->ij", as_cmat(coeffs), np.stack(PAULIS))


def site_operator(op: CMat, site: int, n_qubits: int) -> CMat:
    """Embed a single-qubit operator at ``site`` of an ``n_qubits`` register."""
    out = np.ones((1, 1), dtype=np.complex128)
    for q in range(n_qubits):
        out = kron(out, op if q == site else IDENTITY)
    return out
