"""Dense brickwork evolution on a ring of 2L qubits.

One step is ``𝕌 = E·O``: the odd layer (bonds (0,1), (2,3), ...) acts first,
then the even layer (bonds (1,2), ..., (2L-1,0)). The gate's site 1 sits on
the first qubit of every bond, including the wrap-around bond. Open chains
leave the wrap-around bond out.

In the Heisenberg picture ``σ ↦ 𝕌† σ 𝕌`` the even layer acts first, so an
operator starting on an odd qubit travels right by two sites per step through
``M₊`` and one on an even qubit travels left through ``M₋``.
"""

import logging

import numpy as np
import numpy.typing as npt

from dualep.circuits.models import CorrelationSeries
from dualep.circuits.models import RingSpec
from dualep.circuits.models import SiteRangeError
from dualep.circuits.models import Source
from dualep.exceptions import ParameterError
from dualep.linalg.kernel import CMat
from dualep.linalg.kernel import apply_one_site
from dualep.linalg.kernel import apply_two_site
from dualep.linalg.kernel import as_cmat
from dualep.linalg.kernel import dagger
from dualep.linalg.kernel import require_shape
from dualep.linalg.kernel import unitarity_residual
from dualep.linalg.pauli import PauliIndex
from dualep.linalg.pauli import site_operator
from dualep.transfer.models import Direction

logger = logging.getLogger(__name__)

# Evolution operators are built from exact gates; anything worse signals a bug.
EVOLUTION_UNITARY_TOL = 1e-10
IMAGINARY_TOL = 1e-12


def apply_layer(gate: CMat, bonds: list[tuple[int, int]], state: CMat, n_qubits: int) -> CMat:
    for bond in bonds:
        state = apply_two_site(gate, state, bond, n_qubits)
    return state


def _check_unitary(u: CMat, what: str) -> None:
    residual = unitarity_residual(u)
    if residual >= EVOLUTION_UNITARY_TOL:
        logger.warning("Evolution operator drifted from unitarity", extra={"operator": what, "residual": residual})


def brickwork_unitary(gate: CMat, ring: RingSpec) -> CMat:
    """
    Build one brickwork step ``𝕌 = E·O`` on ``2L`` qubits.

    Args:
        gate: 4x4 two-qubit gate
        ring: Ring size, already bounded by ``MAX_HALF_SITES``

    Returns:
        The dense ``2^{2L} x 2^{2L}`` step unitary.
    """
    gate = as_cmat(gate)
    require_shape(gate, (4, 4), "gate")
    n = ring.n_qubits
    step = np.eye(ring.dim, dtype=np.complex128)
    step = apply_layer(gate, ring.odd_bonds(), step, n)
    step = apply_layer(gate, ring.even_bonds(), step, n)
    _check_unitary(step, "brickwork")
    logger.debug("Built brickwork step", extra={"half_sites": ring.half_sites, "boundary": str(ring.boundary)})
    return step


def site_to_qubit(label: float, ring: RingSpec) -> int:
    """
    Map a half-integer site label ``x`` to the qubit ``2x mod 2L``.

    Raises:
        SiteRangeError: If ``x`` is not a multiple of 1/2, or if it lies off
            an open chain
    """
    doubled = 2 * label
    if doubled != int(doubled):
        msg = f"Site labels must be multiples of 1/2, got {label}"
        raise SiteRangeError(msg)
    if ring.periodic:
        return int(doubled) % ring.n_qubits
    return ring.check_site(int(doubled))


def qubit_to_site(qubit: int, ring: RingSpec) -> float:
    return ring.check_site(qubit) / 2


def lightcone_site(y: int, t: int, ring: RingSpec, *, even_first: bool = False) -> tuple[int, Direction]:
    """
    Where an operator started on qubit ``y`` sits after ``t`` steps.

    Args:
        y: Starting qubit
        t: Number of steps
        ring: Ring
        even_first: True for steps whose even layer acts first, which swaps
            the parities that move right and left

    Returns:
        The end qubit and the transfer direction that governs the edge.

    Raises:
        SiteRangeError: If the edge runs off an open chain
    """
    ring.check_site(y)
    moves_right = (y % 2 == 1) != even_first
    x, direction = (y + 2 * t, Direction.PLUS) if moves_right else (y - 2 * t, Direction.MINUS)
    if ring.periodic:
        return x % ring.n_qubits, direction
    if not 0 <= x < ring.n_qubits:
        msg = f"The light-cone edge from qubit {y} leaves the open chain of {ring.n_qubits} qubits at t = {t}"
        raise SiteRangeError(msg)
    return x, direction


def _heisenberg_step(op: CMat, u_step: CMat) -> CMat:
    return dagger(u_step) @ op @ u_step


def _trace_with(op: CMat, alpha: PauliIndex, x: int, n_qubits: int) -> complex:
    return complex(np.trace(apply_one_site(alpha.matrix, op, x, n_qubits))) / 2**n_qubits


def _real(value: complex, where: dict) -> float:
    if abs(value.imag) > IMAGINARY_TOL:
        logger.warning("Correlator has an imaginary residue", extra={"residue": value.imag, **where})
    return value.real


def _warn_wrap(t: int, ring: RingSpec) -> None:
    if t > ring.max_lightcone_time:
        logger.warning(
            "Time exceeds the light-cone wrap guard; boundary effects reach the edge",
            extra={"t": t, "max_t": ring.max_lightcone_time},
        )


def spatiotemporal_corr(
    u_step: CMat,
    ring: RingSpec,
    alpha: PauliIndex | int | str,
    beta: PauliIndex | int | str,
    x: int,
    y: int,
    t: int,
) -> float:
    """
    Infinite-temperature correlator ``D(x, y, t) = 2^{-2L} tr[σ_x 𝕌^{-t} σ_y 𝕌^t]``.

    ``𝕌^{-t}`` is taken as ``(𝕌†)^t``.

    Raises:
        SiteRangeError: If ``x`` or ``y`` is off the ring
        ParameterError: If ``t`` is negative
    """
    return float(spatiotemporal_map(u_step, ring, alpha, beta, y, t, sites=[x])[t, 0])


def spatiotemporal_map(
    u_step: CMat,
    ring: RingSpec,
    alpha: PauliIndex | int | str,
    beta: PauliIndex | int | str,
    y: int,
    t_max: int,
    sites: list[int] | None = None,
) -> npt.NDArray[np.float64]:
    """
    Table of ``D(x, y, t)`` for ``t = 0..t_max`` (rows) and every qubit ``x`` (columns).

    Args:
        u_step: One step of the evolution
        ring: Ring the step acts on
        alpha: Pauli measured at ``x``
        beta: Pauli inserted at ``y``
        y: Starting qubit
        t_max: Last time
        sites: Restrict the columns to these qubits

    Returns:
        Real array of shape ``(t_max + 1, len(sites))``.
    """
    if t_max < 0:
        msg = f"Time must be non-negative, got t={t_max}"
        raise ParameterError(msg)
    alpha, beta = PauliIndex.parse(alpha), PauliIndex.parse(beta)
    u_step = as_cmat(u_step)
    require_shape(u_step, (ring.dim, ring.dim), "step unitary")
    ring.check_site(y)
    sites = list(range(ring.n_qubits)) if sites is None else [ring.check_site(s) for s in sites]
    _warn_wrap(t_max, ring)

    n = ring.n_qubits
    op = site_operator(beta.matrix, y, n)
    table = np.empty((t_max + 1, len(sites)))
    for t in range(t_max + 1):
        if t:
            op = _heisenberg_step(op, u_step)
        for col, x in enumerate(sites):
            table[t, col] = _real(_trace_with(op, alpha, x, n), {"t": t, "x": x, "y": y})
    return table


def lightcone_series(
    u_step: CMat,
    ring: RingSpec,
    alpha: PauliIndex | int | str,
    beta: PauliIndex | int | str,
    y: int,
    t_max: int,
    *,
    even_first: bool = False,
    source: Source = Source.CIRCUIT,
    metadata: dict | None = None,
) -> CorrelationSeries:
    """
    Follow the light-cone edge from ``y``: ``C(t) = D(x_t, y, t)``.

    The edge site ``x_t`` comes from :func:`lightcone_site`. Times past
    ``ring.max_lightcone_time`` are computed but logged. On an open chain
    the whole edge must stay on the chain.
    """
    alpha, beta = PauliIndex.parse(alpha), PauliIndex.parse(beta)
    u_step = as_cmat(u_step)
    require_shape(u_step, (ring.dim, ring.dim), "step unitary")
    _warn_wrap(t_max, ring)
    lightcone_site(y, t_max, ring, even_first=even_first)

    n = ring.n_qubits
    op = site_operator(beta.matrix, ring.check_site(y), n)
    values = []
    direction = None
    for t in range(t_max + 1):
        if t:
            op = _heisenberg_step(op, u_step)
        x, direction = lightcone_site(y, t, ring, even_first=even_first)
        values.append(_real(_trace_with(op, alpha, x, n), {"t": t, "x": x, "y": y}))

    info = {
        "half_sites": ring.half_sites,
        "boundary": str(ring.boundary),
        "y": y,
        "site": qubit_to_site(y, ring),
        "direction": str(direction),
    }
    return CorrelationSeries(
        alpha=alpha,
        beta=beta,
        times=range(t_max + 1),
        values=values,
        source=source,
        metadata={**info, **(metadata or {})},
    )
