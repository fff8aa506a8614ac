"""Third-order exceptional-point family.

The gate is ``U = (u⊗u) V[J] (v⊗v)`` with ``u = e^{iΨσz} e^{iΦσy}`` and
``v = e^{iφσy} e^{iϑσz}``. At δ = 0 its transfer matrix restricted to
(x, y, z) is the upper-triangular 3x3 Jordan block

    [[r, l1, l2],
     [0, r,  l1],
     [0, 0,  r ]]

with ``τ = tan 2ϑ``, ``r = τ²``, ``l1 = τ(1 - τ²)`` and ``l2 = 1 - τ²``.
The angle φ solves ``sin² 2φ cos 2φ = sin² 2Φ cos 2Φ``; the remaining sign
choices are settled by building the gate and comparing its transfer matrix.
"""

import cmath
import logging
import math

import numpy as np

from dualep.conf import settings
from dualep.families.models import ANGLE_TOL
from dualep.families.models import Ep3Config
from dualep.families.models import Ep3Derived
from dualep.families.models import Ep3Detuned
from dualep.families.models import NoAdmissibleRootError
from dualep.families.models import SplitKind
from dualep.families.models import TransferSelfCheckError
from dualep.gates.models import GateParams
from dualep.gates.services import assemble
from dualep.gates.services import y_rotation
from dualep.gates.services import z_rotation
from dualep.linalg.kernel import CMat
from dualep.linalg.kernel import RMat
from dualep.linalg.pauli import PauliIndex
from dualep.transfer.services import transfer_residual

logger = logging.getLogger(__name__)

X, Y, Z = PauliIndex.X, PauliIndex.Y, PauliIndex.Z

# cos 2Φ itself always solves the cubic; roots this close to it are that root.
SPURIOUS_ROOT_TOL = 1e-9
# 2ϑ candidates around arctan τ, tried in this order.
BRANCH_OFFSETS = (0.0, math.pi, -math.pi)


def cubic_roots(phi_big: float) -> list[float]:
    """
    Real roots of ``c³ - c + k = 0`` with ``k = sin² 2Φ cos 2Φ``.

    The depressed cubic has three real roots whenever ``|k| ≤ 2/(3√3)``,
    which always holds here, so the trigonometric form is exact.
    """
    k = math.sin(2 * phi_big) ** 2 * math.cos(2 * phi_big)
    angle = math.acos(float(np.clip(-3 * math.sqrt(3) * k / 2, -1.0, 1.0))) / 3
    return [2 / math.sqrt(3) * math.cos(angle - 2 * math.pi * m / 3) for m in range(3)]


def admissible_root(phi_big: float) -> float:
    """
    Pick ``c = cos 2φ`` from the cubic.

    The root must satisfy ``|c| < |cos 2Φ|``, differ from ``cos 2Φ`` and share
    its sign; one exists exactly when ``|cos 2Φ| > 1/√3``.

    Raises:
        NoAdmissibleRootError: If no root qualifies
    """
    cos_big = math.cos(2 * phi_big)
    if abs(cos_big) <= 1 / math.sqrt(3) + ANGLE_TOL:
        msg = (
            f"|cos 2Φ| > 1/√3 is required for an admissible root of "
            f"sin² 2φ cos 2φ = sin² 2Φ cos 2Φ, got |cos 2Φ| = {abs(cos_big):.6g}"
        )
        raise NoAdmissibleRootError(msg)
    candidates = [
        c
        for c in cubic_roots(phi_big)
        if abs(c) < abs(cos_big) - ANGLE_TOL
        and abs(c - cos_big) > SPURIOUS_ROOT_TOL
        and math.copysign(1, c) == math.copysign(1, cos_big)
    ]
    if not candidates:
        msg = f"No root of the cubic satisfies |cos 2φ| < |cos 2Φ| for Φ = {phi_big!r}"
        raise NoAdmissibleRootError(msg)
    return max(candidates, key=abs)


def _detuned_block(r: float, l1: float, delta: float) -> tuple[float, float, float, float]:
    d = 2 * delta
    return (
        r * math.cos(d) - l1 * math.sin(d),
        r * math.cos(d),
        l1 * math.cos(d) + r * math.sin(d),
        -r * math.sin(d),
    )


def _detuned(r: float, l1: float, l2: float, delta: float) -> Ep3Detuned:
    r1p, r2p, l3, l4 = _detuned_block(r, l1, delta)
    delta_sq = 4 * l3 * l4 + (r1p - r2p) ** 2
    delta_cap = cmath.sqrt(delta_sq)
    e1 = (r1p + r2p + delta_cap) / 2
    e2 = (r1p + r2p - delta_cap) / 2

    denom = l3 * l4 + (r1p - r) * (r - r2p)
    common = l1 * l3 + l2 * (r - r2p)
    coupling = 2 * l3 * (l2 * l4 + l1 * (r - r1p))
    if delta_cap == 0 or denom == 0:
        a1 = a2 = complex(math.nan, math.nan)
        a3 = math.nan
        kind = SplitKind.EXCEPTIONAL
    else:
        a1 = (coupling + (r1p - r2p + delta_cap) * common) / (2 * delta_cap * denom)
        a2 = (coupling + (r1p - r2p - delta_cap) * common) / (-2 * delta_cap * denom)
        a3 = -common / denom
        kind = SplitKind.REAL if delta_sq > 0 else SplitKind.COMPLEX
    return Ep3Detuned(
        r1p=r1p,
        r2p=r2p,
        l3=l3,
        l4=l4,
        e1=e1,
        e2=e2,
        e3=r,
        e4=1.0,
        delta_cap_p=delta_cap,
        a1=a1,
        a2=a2,
        a3=a3,
        split_kind=kind,
    )


def closed_form_matrix(d: Ep3Derived) -> RMat:
    """
    Closed-form transfer matrix; a detuning rotates the input (x, y) columns by ``2δ``.
    """
    r1p, r2p, l3, l4 = _detuned_block(d.r, d.l1, d.config.delta)
    m = np.eye(4)
    m[X, X], m[X, Y], m[X, Z] = r1p, l3, d.l2
    m[Y, X], m[Y, Y], m[Y, Z] = l4, r2p, d.l1
    m[Z, X], m[Z, Y], m[Z, Z] = 0.0, 0.0, d.r
    return m


def _assemble(d: Ep3Derived, phi_big: float) -> CMat:
    u = z_rotation(d.psi) @ y_rotation(phi_big)
    v = y_rotation(d.phi_small) @ z_rotation(d.varphi)
    return assemble(GateParams(u_plus=u, u_minus=u, v_plus=v, v_minus=v, j_coupling=d.j))


def ep3_gate(d: Ep3Derived, cfg: Ep3Config | None = None) -> CMat:
    """
    Build the family gate and check its transfer matrix against the closed form.

    Raises:
        TransferSelfCheckError: If any entry of ``M₊`` misses the closed form
            by more than ``SELF_CHECK_TOL``; the error carries the residual.
    """
    cfg = d.config if cfg is None else cfg
    u = _assemble(d, cfg.phi_big)
    residual = transfer_residual(u, closed_form_matrix(d))
    worst = float(np.max(np.abs(residual)))
    tol = getattr(settings, "SELF_CHECK_TOL", 1e-10)
    if worst > tol:
        msg = f"ep3 gate misses its closed-form transfer matrix by {worst:.3e} (Φ = {cfg.phi_big!r}, δ = {cfg.delta!r})"
        raise TransferSelfCheckError(msg, residual)
    return u


def solve_ep3(cfg: Ep3Config) -> Ep3Derived:
    """
    Solve the third-order family for ``Φ`` and ``δ``.

    Every combination of the sign of ``sin 2φ`` and the branch of ``2ϑ`` is
    built and the first whose transfer matrix matches the closed form wins;
    ``φ ∈ (0, π/2)`` is tried first.

    Raises:
        NoAdmissibleRootError: If the cubic has no admissible root
        TransferSelfCheckError: If no branch passes the self-check; the
            message lists every tried branch with its residual
    """
    big, delta = cfg.phi_big, cfg.delta
    root = admissible_root(big)
    tol = getattr(settings, "SELF_CHECK_TOL", 1e-10)

    tried = []
    best_residual = None
    for sign in (1.0, -1.0):
        phi_small = sign * math.acos(root) / 2
        tau = -math.sin(2 * big) / math.sin(2 * phi_small)
        r, l1, l2 = tau**2, tau * (1 - tau**2), 1 - tau**2
        j = 0.5 * math.asin(float(np.clip(tau**3, -1.0, 1.0)))
        detuned = _detuned(r, l1, l2, delta) if cfg.detuned else None
        for offset in BRANCH_OFFSETS:
            varphi = (math.atan(tau) + offset) / 2
            derived = Ep3Derived(
                config=cfg,
                psi=varphi - math.pi / 4 - delta,
                phi_small=phi_small,
                varphi=varphi,
                j=j,
                r=r,
                l1=l1,
                l2=l2,
                detuned=detuned,
            )
            residual = transfer_residual(_assemble(derived, big), closed_form_matrix(derived))
            worst = float(np.max(np.abs(residual)))
            tried.append(f"sin 2φ {'>' if sign > 0 else '<'} 0, 2ϑ = atan τ + {offset:+.4f}: {worst:.3e}")
            if best_residual is None or worst < np.max(np.abs(best_residual)):
                best_residual = residual
            if worst <= tol:
                logger.info(
                    "Solved ep3 family",
                    extra={
                        "phi_big": big,
                        "delta": delta,
                        "varphi": varphi,
                        "j": j,
                        "split_kind": str(derived.split_kind),
                    },
                )
                return derived

    msg = f"No sign branch of the ep3 family passes the self-check for Φ = {big!r}: " + "; ".join(tried)
    raise TransferSelfCheckError(msg, best_residual)
