import numpy as np
from attrs import define
from attrs import field

from dualep.conf import settings
from dualep.exceptions import ParameterError
from dualep.linalg.kernel import CMat
from dualep.linalg.kernel import as_cmat
from dualep.linalg.kernel import unitarity_residual


class NonUnitaryFactorError(ParameterError):
    """Exception raised when a single-qubit factor is not in SU(2)."""


def _su2(instance, attribute, value) -> None:  # noqa: ARG001
    tol = getattr(settings, "UNITARY_TOL", 1e-12)
    if value.shape != (2, 2):
        msg = f"{attribute.name} must be 2x2, got shape {value.shape}"
        raise NonUnitaryFactorError(msg)
    residual = unitarity_residual(value)
    if residual >= tol:
        msg = f"{attribute.name} is not unitary: max |u†u - 1| = {residual:.3e}"
        raise NonUnitaryFactorError(msg)
    det = complex(np.linalg.det(value))
    if abs(det - 1) >= tol:
        msg = f"{attribute.name} is not special unitary: det = {det:.6g}"
        raise NonUnitaryFactorError(msg)


_IDENTITY = np.eye(2, dtype=np.complex128)


@define(frozen=True, eq=False)
class GateParams:
    """
    Parameters of ``U = e^{iθ} (u₊⊗u₋) V[J] (v₊⊗v₋)``.

    Every dual-unitary two-qubit gate has this form; θ does not affect any
    transfer matrix but is kept so phase invariance can be asserted.
    """

    theta: float = 0.0
    u_plus: CMat = field(factory=_IDENTITY.copy, converter=as_cmat, validator=_su2)
    u_minus: CMat = field(factory=_IDENTITY.copy, converter=as_cmat, validator=_su2)
    v_plus: CMat = field(factory=_IDENTITY.copy, converter=as_cmat, validator=_su2)
    v_minus: CMat = field(factory=_IDENTITY.copy, converter=as_cmat, validator=_su2)
    j_coupling: float = 0.0


@define(frozen=True)
class DualUnitarityCheck:
    """Outcome of :func:`dualep.gates.services.is_dual_unitary`."""

    ok: bool
    unitary_residual: float
    dual_residual: float

    def __bool__(self) -> bool:
        return self.ok
