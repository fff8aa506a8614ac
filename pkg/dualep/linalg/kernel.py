"""Dense complex matrix kernel.

Tensor ordering: site 1 is the LEFT Kronecker factor, so ``kron(a, b)`` puts
``a`` on site 1 and ``partial_trace(m, 1)`` traces that factor out. Qubit 0 of
a ring is likewise the most significant bit of the computational index.
"""

import logging

import numpy as np
import numpy.typing as npt
import scipy.linalg

from dualep.conf import settings
from dualep.exceptions import ParameterError

logger = logging.getLogger(__name__)

type CMat = npt.NDArray[np.complex128]
type RMat = npt.NDArray[np.float64]


class DimensionError(ParameterError):
    """Exception raised when a matrix has the wrong shape."""


class NotHermitianError(ParameterError):
    """Exception raised when a generator is not Hermitian."""


def as_cmat(m: npt.ArrayLike) -> CMat:
    return np.asarray(m, dtype=np.complex128)


def require_shape(m: npt.NDArray, shape: tuple[int, ...], name: str = "matrix") -> None:
    """
    Check a matrix shape.

    Raises:
        DimensionError: If ``m.shape`` differs from ``shape``
    """
    if m.shape != shape:
        msg = f"{name} must have shape {shape}, got {m.shape}"
        raise DimensionError(msg)


def dagger(m: CMat) -> CMat:
    return m.conj().T


def kron(a: CMat, b: CMat) -> CMat:
    """Kronecker product with ``a`` on the left (site 1)."""
    return np.kron(as_cmat(a), as_cmat(b))


def unitarity_residual(u: CMat) -> float:
    """Return ``max |U†U - 1|``."""
    u = as_cmat(u)
    return float(np.max(np.abs(dagger(u) @ u - np.eye(u.shape[0]))))


def expm_minus_i(h: CMat) -> CMat:
    """
    Compute ``exp(-iH)`` for Hermitian ``H`` by eigendecomposition.

    ``H = Q Λ Q†`` gives ``exp(-iH) = Q exp(-iΛ) Q†``, which stays unitary to
    machine precision.

    Args:
        h: Square Hermitian matrix

    Returns:
        The unitary ``exp(-iH)``.

    Raises:
        DimensionError: If ``h`` is not square
        NotHermitianError: If ``max |H - H†|`` exceeds the Hermiticity tolerance
    """
    h = as_cmat(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        msg = f"Generator must be square, got shape {h.shape}"
        raise DimensionError(msg)

    tol = getattr(settings, "HERMITIAN_TOL", 1e-12)
    residual = float(np.max(np.abs(h - dagger(h)))) if h.size else 0.0
    if residual >= tol:
        msg = f"Generator is not Hermitian: max |H - H†| = {residual:.3e} >= {tol:.1e}"
        raise NotHermitianError(msg)

    evals, evecs = scipy.linalg.eigh((h + dagger(h)) / 2)
    return (evecs * np.exp(-1j * evals)) @ dagger(evecs)


def partial_trace(m: CMat, which: int) -> CMat:
    """
    Trace one qubit out of a two-qubit operator.

    Args:
        m: 4x4 operator in the ``kron`` ordering
        which: 1 traces the left factor, 2 the right factor

    Returns:
        The 2x2 reduced operator.

    Raises:
        DimensionError: If ``m`` is not 4x4 or ``which`` is not 1 or 2
    """
    m = as_cmat(m)
    require_shape(m, (4, 4), "partial_trace input")
    t = m.reshape(2, 2, 2, 2)
    if which == 1:
        return np.einsum("abad->bd", t)
    if which == 2:
        return np.einsum("abcb->ac", t)
    msg = f"Site index must be 1 or 2, got {which}"
    raise DimensionError(msg)


def apply_two_site(
    gate: CMat,
    state: CMat,
    sites: tuple[int, int],
    n_qubits: int,
) -> CMat:
    """
    Left-multiply a ``2^n x k`` block by a two-qubit gate acting on ``sites``.

    ``sites[0]`` receives the gate's site 1 (left factor), which matters for the
    wrap-around bond of a ring.
    """
    p, q = sites
    cols = state.shape[1]
    t = state.reshape((2,) * n_qubits + (cols,))
    g = as_cmat(gate).reshape(2, 2, 2, 2)
    out = np.tensordot(g, t, axes=([2, 3], [p, q]))
    # tensordot puts the two new output legs first
    out = np.moveaxis(out, [0, 1], [p, q])
    return out.reshape(2**n_qubits, cols)


def apply_one_site(op: CMat, state: CMat, site: int, n_qubits: int) -> CMat:
    cols = state.shape[1]
    t = state.reshape((2,) * n_qubits + (cols,))
    out = np.tensordot(as_cmat(op), t, axes=([1], [site]))
    out = np.moveaxis(out, 0, site)
    return out.reshape(2**n_qubits, cols)
