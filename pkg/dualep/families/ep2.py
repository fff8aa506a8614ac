"""Second-order exceptional-point family.

The gate is ``U = (A⊗A) V[J] (B⊗B)`` with ``A = e^{iΦσy}`` and ``B = e^{iφσy}``.
Its transfer matrix acts on the (x, z) plane as a 2x2 Jordan block with
eigenvalue ``r1 = tan 2Φ`` when ``φ = Φ - π/4``. A detuning ``δ`` shifts
``φ`` by ``-δ`` and splits the block into two eigenvalues.
"""

import cmath
import logging
import math

import numpy as np

from dualep.conf import settings
from dualep.families.models import ANGLE_TOL
from dualep.families.models import Ep2Config
from dualep.families.models import Ep2Derived
from dualep.families.models import Ep2Spectrum
from dualep.families.models import InadmissibleParameterError
from dualep.families.models import SplitKind
from dualep.families.models import TransferSelfCheckError
from dualep.gates.models import GateParams
from dualep.gates.services import assemble
from dualep.gates.services import y_rotation
from dualep.linalg.kernel import CMat
from dualep.linalg.kernel import RMat
from dualep.linalg.pauli import PauliIndex
from dualep.transfer.services import transfer_residual

logger = logging.getLogger(__name__)

X, Y, Z = PauliIndex.X, PauliIndex.Y, PauliIndex.Z


def _check_admissible(cfg: Ep2Config, phi_small: float) -> None:
    cos_big = abs(math.cos(2 * cfg.phi_big))
    cos_small = abs(math.cos(2 * phi_small))
    if cos_small > cos_big + ANGLE_TOL:
        msg = (
            f"|cos 2Φ| ≥ |cos 2φ| is required, got |cos 2Φ| = {cos_big:.6g} "
            f"< |cos 2φ| = {cos_small:.6g} (Φ = {cfg.phi_big!r}, δ = {cfg.delta!r})"
        )
        raise InadmissibleParameterError(msg)


def _spectrum(cfg: Ep2Config, j: float) -> Ep2Spectrum:
    big, delta = cfg.phi_big, cfg.delta
    cos_sq = math.cos(2 * big) ** 2
    centre = math.sin(4 * big - 2 * delta) / (2 * cos_sq)
    delta_sq = -math.sin(2 * delta) * math.sin(8 * big - 2 * delta) / cos_sq**2
    delta_cap = cmath.sqrt(delta_sq)
    l_prime = (-math.cos(4 * big - 2 * delta) + 0.5 * math.sin(2 * delta) * math.sin(4 * big)) / cos_sq

    if delta_sq > 0:
        kind = SplitKind.REAL
    elif delta_sq < 0:
        kind = SplitKind.COMPLEX
    else:
        kind = SplitKind.EXCEPTIONAL
    return Ep2Spectrum(
        e1=centre + delta_cap / 2,
        e2=centre - delta_cap / 2,
        e3=math.sin(2 * j),
        e4=1.0,
        delta_cap=delta_cap,
        l_prime=l_prime,
        split_kind=kind,
    )


def closed_form_matrix(d: Ep2Derived) -> RMat:
    """
    Closed-form transfer matrix of the family, detuned or not.

    At δ = 0 the (x, z) block is ``[[r1, l], [0, r1]]`` and the y entry is
    ``r2``. A detuning rotates the output side of the (x, z) block by ``2δ``.
    """
    big, delta = d.config.phi_big, d.config.delta
    cos_sq = math.cos(2 * big) ** 2
    slope = math.tan(2 * big)
    m = np.eye(4)
    m[X, X] = slope * math.cos(2 * delta)
    m[X, Z] = (-math.cos(4 * big - 2 * delta) + 0.5 * math.sin(2 * delta) * math.sin(4 * big)) / cos_sq
    m[Z, X] = slope * math.sin(2 * delta)
    m[Z, Z] = (math.sin(4 * big - 2 * delta) - 0.5 * math.cos(2 * delta) * math.sin(4 * big)) / cos_sq
    m[Y, Y] = math.sin(2 * d.j)
    return m


def ep2_gate(d: Ep2Derived, cfg: Ep2Config | None = None) -> CMat:
    """
    Build the family gate and check its transfer matrix against the closed form.

    Args:
        d: Solved parameters
        cfg: Configuration, defaults to the one ``d`` was solved from

    Returns:
        The 4x4 dual-unitary gate.

    Raises:
        TransferSelfCheckError: If any entry of ``M₊`` misses the closed form
            by more than ``SELF_CHECK_TOL``; the error carries the residual.
    """
    cfg = d.config if cfg is None else cfg
    a, b = y_rotation(cfg.phi_big), y_rotation(d.phi_small)
    u = assemble(GateParams(u_plus=a, u_minus=a, v_plus=b, v_minus=b, j_coupling=d.j))

    residual = transfer_residual(u, closed_form_matrix(d))
    worst = float(np.max(np.abs(residual)))
    tol = getattr(settings, "SELF_CHECK_TOL", 1e-10)
    if worst > tol:
        msg = f"ep2 gate misses its closed-form transfer matrix by {worst:.3e} (Φ = {cfg.phi_big!r}, δ = {cfg.delta!r})"
        raise TransferSelfCheckError(msg, residual)
    return u


def solve_ep2(cfg: Ep2Config) -> Ep2Derived:
    """
    Solve the second-order family for ``Φ`` and ``δ``.

    ``φ = Φ - π/4 - δ``, ``J = ½ arcsin(tan² 2Φ)``, ``r1 = tan 2Φ``,
    ``r2 = r1²`` and ``l = r1² - 1``. The gate is built once and its transfer
    matrix compared with the closed form before the bundle is returned.

    Raises:
        InadmissibleParameterError: If ``|cos 2Φ| < |cos 2φ|``
        TransferSelfCheckError: If the built gate fails the self-check
    """
    phi_small = cfg.phi_big - math.pi / 4 - cfg.delta
    _check_admissible(cfg, phi_small)

    slope = math.tan(2 * cfg.phi_big)
    j = 0.5 * math.asin(min(slope**2, 1.0))
    derived = Ep2Derived(
        config=cfg,
        phi_small=phi_small,
        j=j,
        r1=slope,
        r2=slope**2,
        l=slope**2 - 1,
        spectrum=_spectrum(cfg, j) if cfg.detuned else None,
    )
    ep2_gate(derived)
    logger.info(
        "Solved ep2 family",
        extra={"phi_big": cfg.phi_big, "delta": cfg.delta, "j": j, "split_kind": str(derived.split_kind)},
    )
    return derived


def peak_time(d: Ep2Derived) -> float:
    """Time ``ξ = -1/(2 log|r1|)`` at which ``|C^{xz}(t)|`` peaks; infinite when ``|r1| = 1``."""
    magnitude = abs(d.r1)
    if magnitude >= 1:
        return math.inf
    return -1 / (2 * math.log(magnitude))
