"""Light-cone transfer matrices, their powers and the ergodicity classes."""

import logging

import numpy as np
import numpy.typing as npt
import scipy.linalg

from dualep.conf import settings
from dualep.exceptions import DualEPError
from dualep.exceptions import ParameterError
from dualep.gates.services import is_dual_unitary
from dualep.linalg.kernel import CMat
from dualep.linalg.kernel import as_cmat
from dualep.linalg.kernel import dagger
from dualep.linalg.kernel import kron
from dualep.linalg.kernel import partial_trace
from dualep.linalg.kernel import require_shape
from dualep.linalg.pauli import IDENTITY
from dualep.linalg.pauli import PAULIS
from dualep.linalg.pauli import PauliIndex
from dualep.linalg.pauli import pauli_coeffs
from dualep.transfer.models import Direction
from dualep.transfer.models import ErgodicityClass
from dualep.transfer.models import TransferMatrix

logger = logging.getLogger(__name__)


class NotDualUnitaryError(DualEPError):
    """Exception raised when a dual-unitary gate is required but not given."""


class ClassificationError(DualEPError):
    """Exception raised when a transfer matrix cannot be classified."""


def _transfer(u: CMat, direction: Direction) -> TransferMatrix:
    u = as_cmat(u)
    require_shape(u, (4, 4), "gate")
    check = is_dual_unitary(u)
    if not check.ok:
        logger.warning(
            "Transfer matrix of a non dual-unitary gate; classification is invalid",
            extra={
                "direction": str(direction),
                "unitary_residual": check.unitary_residual,
                "dual_residual": check.dual_residual,
            },
        )

    traced_site = 1 if direction is Direction.PLUS else 2
    entries = np.empty((4, 4), dtype=np.complex128)
    for beta, sigma in enumerate(PAULIS):
        local = kron(sigma, IDENTITY) if direction is Direction.PLUS else kron(IDENTITY, sigma)
        image = partial_trace(dagger(u) @ local @ u, traced_site) / 2
        entries[:, beta] = pauli_coeffs(image)

    imaginary = float(np.max(np.abs(entries.imag)))
    if imaginary > 1e-12:
        logger.warning("Transfer matrix has imaginary residue", extra={"residue": imaginary})
    return TransferMatrix(entries=entries.real, direction=direction, dual_unitary=check.ok)


def transfer_plus(u: CMat) -> TransferMatrix:
    """
    Matrix of ``a ↦ ½ tr₁[U†(a⊗1)U]`` in the Pauli basis.

    Args:
        u: 4x4 gate, expected dual-unitary

    Returns:
        The right-moving transfer matrix. A non dual-unitary gate still gets a
        matrix, flagged with ``dual_unitary=False`` and logged as a warning.
    """
    return _transfer(u, Direction.PLUS)


def transfer_minus(u: CMat) -> TransferMatrix:
    """Mirror of :func:`transfer_plus`: ``a ↦ ½ tr₂[U†(1⊗a)U]``."""
    return _transfer(u, Direction.MINUS)


def lightcone_corr(m: TransferMatrix, alpha: PauliIndex | int, beta: PauliIndex | int, t: int) -> float:
    """
    Light-cone correlator ``C^{αβ}(t) = (M^{2t})[α][β]``.

    Raises:
        ParameterError: If ``t`` is negative
    """
    if t < 0:
        msg = f"Time must be non-negative, got t={t}"
        raise ParameterError(msg)
    return float(m.power(2 * t)[int(alpha), int(beta)])


def lightcone_values(m: TransferMatrix, alpha: PauliIndex | int, beta: PauliIndex | int, t_max: int) -> list[float]:
    """``C^{αβ}(t)`` for ``t = 0..t_max`` by accumulating ``M²``."""
    if t_max < 0:
        msg = f"t_max must be non-negative, got {t_max}"
        raise ParameterError(msg)
    step = m.power(2)
    acc = np.eye(4)
    values = []
    for _ in range(t_max + 1):
        values.append(float(acc[int(alpha), int(beta)]))
        acc = acc @ step
    return values


def nontrivial_eigenvalues(m: TransferMatrix) -> np.ndarray:
    """Eigenvalues of the (x, y, z) block; the identity row contributes the trivial 1."""
    return scipy.linalg.eigvals(m.entries[1:, 1:])


def classify(m: TransferMatrix, tol: float | None = None) -> ErgodicityClass:
    """
    Ergodicity class from the three nontrivial eigenvalues.

    All equal to 1: noninteracting. Some equal to 1: nonergodic. None equal to
    1 but some on the unit circle: ergodic and non-mixing. All inside the unit
    circle: ergodic and mixing.

    Raises:
        ClassificationError: If the matrix came from a non dual-unitary gate
    """
    if not m.dual_unitary:
        msg = "Cannot classify the transfer matrix of a non dual-unitary gate"
        raise ClassificationError(msg)
    tol = getattr(settings, "JORDAN_TOL", 1e-8) if tol is None else tol
    evals = nontrivial_eigenvalues(m)
    at_one = np.abs(evals - 1) < tol
    on_circle = np.abs(np.abs(evals) - 1) < tol
    if at_one.all():
        label = ErgodicityClass.NONINTERACTING
    elif at_one.any():
        label = ErgodicityClass.NONERGODIC
    elif on_circle.any():
        label = ErgodicityClass.ERGODIC_NONMIXING
    else:
        label = ErgodicityClass.ERGODIC_MIXING
    logger.debug(
        "Classified transfer matrix",
        extra={"label": str(label), "eigenvalues": [f"{e:.6g}" for e in evals]},
    )
    return label


def transfer_residual(u: CMat, target: npt.ArrayLike) -> np.ndarray:
    """Entrywise ``M₊(u) - target``; the oracle behind every family self-check."""
    return transfer_plus(u).entries - np.asarray(target, dtype=np.float64)
