"""Construction and tests of dual-unitary two-qubit gates."""

import logging

import numpy as np

from dualep.conf import settings
from dualep.gates.models import DualUnitarityCheck
from dualep.gates.models import GateParams
from dualep.gates.models import NonUnitaryFactorError
from dualep.linalg.kernel import CMat
from dualep.linalg.kernel import as_cmat
from dualep.linalg.kernel import dagger
from dualep.linalg.kernel import expm_minus_i
from dualep.linalg.kernel import kron
from dualep.linalg.kernel import require_shape
from dualep.linalg.kernel import unitarity_residual
from dualep.linalg.pauli import IDENTITY
from dualep.linalg.pauli import SIGMA_X
from dualep.linalg.pauli import SIGMA_Y
from dualep.linalg.pauli import SIGMA_Z

logger = logging.getLogger(__name__)

XX = kron(SIGMA_X, SIGMA_X)
YY = kron(SIGMA_Y, SIGMA_Y)
ZZ = kron(SIGMA_Z, SIGMA_Z)

SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]],
    dtype=np.complex128,
)


def bond_hamiltonian(j_coupling: float) -> CMat:
    """``π/4 XX + π/4 YY + J ZZ``, the XXZ bond term."""
    return np.pi / 4 * (XX + YY) + j_coupling * ZZ


def build_v(j_coupling: float) -> CMat:
    """
    Build the interaction core ``V[J] = exp(-i(π/4 XX + π/4 YY + J ZZ))``.

    Args:
        j_coupling: ZZ coupling J in radians

    Returns:
        4x4 unitary. ``V[π/4]`` is SWAP up to a global phase.
    """
    return expm_minus_i(bond_hamiltonian(j_coupling))


def y_rotation(angle: float) -> CMat:
    """``exp(i·angle·σy)``."""
    return np.cos(angle) * IDENTITY + 1j * np.sin(angle) * SIGMA_Y


def z_rotation(angle: float) -> CMat:
    """``exp(i·angle·σz)``."""
    return np.cos(angle) * IDENTITY + 1j * np.sin(angle) * SIGMA_Z


def assemble(p: GateParams) -> CMat:
    """
    Assemble ``U = e^{iθ} (u₊⊗u₋) V[J] (v₊⊗v₋)``.

    Args:
        p: Gate parameters (factors already validated as SU(2))

    Returns:
        The 4x4 gate.

    Raises:
        NonUnitaryFactorError: If the assembled gate drifts from unitarity
    """
    u = (
        np.exp(1j * p.theta)
        * kron(p.u_plus, p.u_minus)
        @ build_v(p.j_coupling)
        @ kron(p.v_plus, p.v_minus)
    )
    residual = unitarity_residual(u)
    if residual >= getattr(settings, "UNITARY_TOL", 1e-12):
        msg = f"Assembled gate is not unitary: residual {residual:.3e}"
        raise NonUnitaryFactorError(msg)
    return u


def dual_reshuffle(u: CMat) -> CMat:
    """
    Space-time reshuffle ``<k|<l|Ũ|i>|j> = <j|<l|U|i>|k>``.

    The map is an involution.
    """
    u = as_cmat(u)
    require_shape(u, (4, 4), "gate")
    # axes: (out1, out2, in1, in2)
    t = u.reshape(2, 2, 2, 2)
    return np.einsum("jlik->klij", t).reshape(4, 4)


def is_dual_unitary(u: CMat, tol: float | None = None) -> DualUnitarityCheck:
    """
    Check unitarity of a gate and of its reshuffled dual.

    Args:
        u: 4x4 gate
        tol: Max-norm tolerance, defaults to ``DUAL_UNITARY_TOL``

    Returns:
        The verdict together with both residuals.
    """
    tol = getattr(settings, "DUAL_UNITARY_TOL", 1e-10) if tol is None else tol
    u = as_cmat(u)
    require_shape(u, (4, 4), "gate")
    dual = dual_reshuffle(u)
    unitary_residual = max(
        unitarity_residual(u),
        float(np.max(np.abs(u @ dagger(u) - np.eye(4)))),
    )
    dual_residual = max(
        unitarity_residual(dual),
        float(np.max(np.abs(dual @ dagger(dual) - np.eye(4)))),
    )
    return DualUnitarityCheck(
        ok=unitary_residual < tol and dual_residual < tol,
        unitary_residual=unitary_residual,
        dual_residual=dual_residual,
    )


def random_su2(rng: np.random.Generator) -> CMat:
    """
    Haar-random SU(2) element from a uniform point on the 3-sphere.

    Args:
        rng: Seeded numpy generator

    Returns:
        ``a·1 + i(b·σx + c·σy + d·σz)`` with ``(a, b, c, d)`` uniform on S³.
    """
    q = rng.normal(size=4)
    a, b, c, d = q / np.linalg.norm(q)
    return a * IDENTITY + 1j * (b * SIGMA_X + c * SIGMA_Y + d * SIGMA_Z)


def random_gate_params(rng: np.random.Generator) -> GateParams:
    return GateParams(
        theta=float(rng.uniform(-np.pi, np.pi)),
        u_plus=random_su2(rng),
        u_minus=random_su2(rng),
        v_plus=random_su2(rng),
        v_minus=random_su2(rng),
        j_coupling=float(rng.uniform(0, np.pi / 2)),
    )
