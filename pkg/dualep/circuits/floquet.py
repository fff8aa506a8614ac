"""Kicked XXZ chain whose Floquet period reproduces the family circuits.

The bond Hamiltonian is ``π/4 (XX + YY) + J ZZ`` and the kicks are global
single-site rotations ``e^{iθσ}``. The period operators list their factors in
the order they act:

    jordan2:  U2 Ue U3 U2 Uo U3
    jordan3:  U1 U2 Ue U3 U4 U1 U2 Uo U3 U4

with ``U1 = e^{iϑΣσz}``, ``U2 = e^{iφΣσy}``, ``U3 = e^{iΦΣσy}`` and
``U4 = e^{iΨΣσz}``. Each half period is then the family gate on every bond
of one layer, and a period is a brickwork step with the even layer first.
"""

import logging
from collections.abc import Callable

import numpy as np

from dualep.circuits.brickwork import apply_layer
from dualep.circuits.brickwork import lightcone_series
from dualep.circuits.brickwork import spatiotemporal_map
from dualep.circuits.models import CorrelationSeries
from dualep.circuits.models import FloquetFamily
from dualep.circuits.models import FloquetSpec
from dualep.circuits.models import RingSpec
from dualep.circuits.models import Source
from dualep.gates.services import build_v
from dualep.gates.services import y_rotation
from dualep.gates.services import z_rotation
from dualep.linalg.kernel import CMat
from dualep.linalg.kernel import apply_one_site
from dualep.linalg.kernel import unitarity_residual
from dualep.linalg.pauli import PauliIndex

logger = logging.getLogger(__name__)

type Layer = Callable[[CMat], CMat]

EVOLUTION_UNITARY_TOL = 1e-10


def _kick(rotation: CMat, ring: RingSpec) -> Layer:
    def apply(state: CMat) -> CMat:
        for q in range(ring.n_qubits):
            state = apply_one_site(rotation, state, q, ring.n_qubits)
        return state

    return apply


def _bonds(j: float, bonds: list[tuple[int, int]], ring: RingSpec) -> Layer:
    core = build_v(j)

    def apply(state: CMat) -> CMat:
        return apply_layer(core, bonds, state, ring.n_qubits)

    return apply


def period_layers(spec: FloquetSpec) -> list[Layer]:
    """Layers of one period in the order they act."""
    ring = spec.ring
    u1 = _kick(z_rotation(spec.varphi), ring)
    u2 = _kick(y_rotation(spec.phi_small), ring)
    u3 = _kick(y_rotation(spec.phi_big), ring)
    u4 = _kick(z_rotation(spec.psi), ring)
    ue = _bonds(spec.j, ring.even_bonds(), ring)
    uo = _bonds(spec.j, ring.odd_bonds(), ring)
    if spec.family is FloquetFamily.JORDAN2:
        return [u2, ue, u3, u2, uo, u3]
    return [u1, u2, ue, u3, u4, u1, u2, uo, u3, u4]


def kicked_xxz_period(spec: FloquetSpec) -> CMat:
    """
    Dense period unitary ``U_T`` of the kicked chain.

    Returns:
        ``2^{2L} x 2^{2L}`` unitary; the first listed layer is applied first.
    """
    period = np.eye(spec.ring.dim, dtype=np.complex128)
    for layer in period_layers(spec):
        period = layer(period)

    residual = unitarity_residual(period)
    if residual >= EVOLUTION_UNITARY_TOL:
        logger.warning("Floquet period drifted from unitarity", extra={"residual": residual})
    logger.debug(
        "Built Floquet period",
        extra={"family": str(spec.family), "half_sites": spec.ring.half_sites},
    )
    return period


def floquet_corr(
    spec: FloquetSpec,
    alpha: PauliIndex | int | str,
    beta: PauliIndex | int | str,
    y: int,
    t_max: int,
    x: int | None = None,
) -> CorrelationSeries:
    """
    Correlators of the kicked chain with ``U_T`` as the step.

    Without ``x`` the series follows the light-cone edge from ``y``. The even
    layer acts first within a period, so an operator started on an even qubit
    moves right. Times past ``ring.max_lightcone_time`` are computed but
    logged. On an open chain the boundary qubits idle through the half period
    that has no bond for them and only see the kicks.
    """
    period = kicked_xxz_period(spec)
    metadata = {
        "family": str(spec.family),
        "phi_big": spec.phi_big,
        "phi_small": spec.phi_small,
        "j": spec.j,
        "psi": spec.psi,
        "varphi": spec.varphi,
    }
    if x is not None:
        column = spatiotemporal_map(period, spec.ring, alpha, beta, y, t_max, sites=[x])[:, 0]
        return CorrelationSeries(
            alpha=alpha,
            beta=beta,
            times=range(t_max + 1),
            values=column,
            source=Source.FLOQUET,
            metadata={"half_sites": spec.ring.half_sites, "x": x, "y": y, **metadata},
        )
    return lightcone_series(
        period,
        spec.ring,
        alpha,
        beta,
        y,
        t_max,
        even_first=True,
        source=Source.FLOQUET,
        metadata=metadata,
    )
