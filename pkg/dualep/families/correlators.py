"""Closed-form light-cone correlators of the exceptional-point families."""

import logging
from collections.abc import Iterable

from dualep.circuits.models import CorrelationSeries
from dualep.circuits.models import Source
from dualep.exceptions import ParameterError
from dualep.families.models import DegenerateSpectrumError
from dualep.families.models import DetuningPoint
from dualep.families.models import Ep2Derived
from dualep.families.models import Ep3Derived
from dualep.families.models import Family
from dualep.families.models import InadmissibleParameterError
from dualep.families.models import SplitKind
from dualep.families.models import UnsupportedChannelError
from dualep.families.services import Derived
from dualep.families.services import closed_form_matrix
from dualep.families.services import solve_family
from dualep.linalg.pauli import PauliIndex
from dualep.transfer.models import TransferMatrix
from dualep.transfer.services import lightcone_values

logger = logging.getLogger(__name__)

I, X, Y, Z = PauliIndex.I, PauliIndex.X, PauliIndex.Y, PauliIndex.Z

# Relative size of the imaginary residue tolerated when complex modes cancel.
REALNESS_TOL = 1e-12


def _check_family(family: Family | str, d: Derived) -> None:
    if Family(family) is not d.family:
        msg = f"Parameters belong to {d.family}, not {family}"
        raise ParameterError(msg)


def _check_time(t: int) -> None:
    if t < 0:
        msg = f"Time must be non-negative, got t={t}"
        raise ParameterError(msg)


def _power_term(coeff: float, base: float, exponent: int) -> float:
    # Terms of the form t·base^(2t-1) vanish at t = 0 without evaluating base^-1.
    return 0.0 if coeff == 0 else coeff * base**exponent


def _ep2(d: Ep2Derived, alpha: PauliIndex, beta: PauliIndex, t: int) -> float:
    n = 2 * t
    if alpha == beta:
        return d.r2**n if alpha is Y else d.r1**n
    if (alpha, beta) == (X, Z):
        return _power_term(n * d.l, d.r1, n - 1)
    # The y row and column decouple and the block is upper triangular.
    return 0.0


def _ep3(d: Ep3Derived, alpha: PauliIndex, beta: PauliIndex, t: int) -> float:
    n = 2 * t
    if alpha == beta:
        return d.r**n
    if (alpha, beta) == (X, Z):
        return _power_term(n * d.l2, d.r, n - 1) + _power_term(t * (n - 1) * d.l1**2, d.r, n - 2)
    if (alpha, beta) in {(X, Y), (Y, Z)}:
        return _power_term(n * d.l1, d.r, n - 1)
    msg = f"No closed form for the {alpha.label}{beta.label} channel of the ep3 family; use lightcone_corr"
    raise UnsupportedChannelError(msg)


def analytic_corr(
    family: Family | str,
    d: Derived,
    alpha: PauliIndex | int | str,
    beta: PauliIndex | int | str,
    t: int,
) -> float:
    """
    Closed-form ``C^{αβ}(t)`` at the exceptional point.

    ep2 has a closed form for every channel. ep3 covers the diagonal channels
    and ``xz``, ``xy``, ``yz``; the remaining off-diagonal channels raise.

    Raises:
        InadmissibleParameterError: If ``d`` is detuned; use :func:`detuned_corr`
        UnsupportedChannelError: For ep3 channels without a closed form
    """
    _check_family(family, d)
    _check_time(t)
    if d.delta != 0:
        msg = f"analytic_corr needs δ = 0, got δ = {d.delta!r}; use detuned_corr for detuned families"
        raise InadmissibleParameterError(msg)
    alpha, beta = PauliIndex.parse(alpha), PauliIndex.parse(beta)
    if I in (alpha, beta):
        return 1.0 if alpha == beta else 0.0
    if isinstance(d, Ep2Derived):
        return _ep2(d, alpha, beta, t)
    return _ep3(d, alpha, beta, t)


def detuned_corr(family: Family | str, d: Derived, t: int) -> float:
    """
    Closed-form ``C^{xz}(t)`` away from the exceptional point.

    ep2: ``l'(E1^{2t} - E2^{2t})/Δ``. ep3: ``A1 E1^{2t} + A2 E2^{2t} + A3 E3^{2t}``.
    Evaluated in complex arithmetic; the imaginary part cancels for a
    conjugate pair and only the real part is returned.

    Raises:
        InadmissibleParameterError: If ``d`` is not detuned
        DegenerateSpectrumError: If the split vanishes, so the formula is singular
    """
    _check_family(family, d)
    _check_time(t)
    if d.delta == 0:
        msg = "detuned_corr needs δ ≠ 0; use analytic_corr at the exceptional point"
        raise InadmissibleParameterError(msg)

    n = 2 * t
    if isinstance(d, Ep2Derived):
        s = d.spectrum
        if s is None or s.delta_cap == 0:
            msg = f"Δ = 0 at δ = {d.delta!r}; the detuned ep2 formula is singular"
            raise DegenerateSpectrumError(msg)
        value = s.l_prime * (s.e1**n - s.e2**n) / s.delta_cap
        scale = abs(s.l_prime / s.delta_cap)
    else:
        m = d.detuned
        if m is None or m.split_kind is SplitKind.EXCEPTIONAL:
            msg = f"Δ' = 0 at δ = {d.delta!r}; the detuned ep3 formula is singular"
            raise DegenerateSpectrumError(msg)
        value = m.a1 * m.e1**n + m.a2 * m.e2**n + m.a3 * m.e3**n
        scale = abs(m.a1) + abs(m.a2) + abs(m.a3)

    value = complex(value)
    if abs(value.imag) > REALNESS_TOL * max(1.0, scale):
        logger.warning(
            "Detuned correlator keeps an imaginary residue",
            extra={"family": str(d.family), "delta": d.delta, "t": t, "residue": value.imag},
        )
    return value.real


def analytic_series(
    d: Derived,
    alpha: PauliIndex | int | str,
    beta: PauliIndex | int | str,
    t_max: int,
) -> CorrelationSeries:
    """
    Closed-form series for ``t = 0..t_max``.

    Detuned bundles only have a closed form for ``xz``; other channels then
    come from powers of the closed-form transfer matrix.
    """
    alpha, beta = PauliIndex.parse(alpha), PauliIndex.parse(beta)
    times = range(t_max + 1)
    if d.delta == 0:
        values = [analytic_corr(d.family, d, alpha, beta, t) for t in times]
    elif (alpha, beta) == (X, Z):
        values = [detuned_corr(d.family, d, t) for t in times]
    else:
        values = lightcone_values(TransferMatrix(closed_form_matrix(d)), alpha, beta, t_max)
    return CorrelationSeries(
        alpha=alpha,
        beta=beta,
        times=times,
        values=values,
        source=Source.ANALYTIC,
        metadata={"family": str(d.family), "phi_big": d.config.phi_big, "delta": d.delta},
    )


def transfer_series(
    m: TransferMatrix,
    alpha: PauliIndex | int | str,
    beta: PauliIndex | int | str,
    t_max: int,
    metadata: dict | None = None,
) -> CorrelationSeries:
    """Series of ``(M^{2t})[α][β]`` for any transfer matrix."""
    return CorrelationSeries(
        alpha=alpha,
        beta=beta,
        times=range(t_max + 1),
        values=lightcone_values(m, alpha, beta, t_max),
        source=Source.TRANSFER,
        metadata={"direction": str(m.direction), **(metadata or {})},
    )


def detuning_scan(family: Family | str, phi_big: float, deltas: Iterable[float]) -> list[DetuningPoint]:
    """
    Eigenvalue trajectories through the exceptional point.

    For every δ the family is solved (and self-checked) and the two splitting
    eigenvalues plus the spectator ``E3`` are recorded: ``r2`` for ep2 and
    ``r`` for ep3.
    """
    points = []
    for delta in deltas:
        d = solve_family(family, phi_big, delta)
        if isinstance(d, Ep2Derived):
            if d.spectrum is None:
                e1 = e2 = complex(d.r1)
                e3 = complex(d.r2)
            else:
                e1, e2, e3 = d.spectrum.e1, d.spectrum.e2, complex(d.spectrum.e3)
        elif d.detuned is None:
            e1 = e2 = e3 = complex(d.r)
        else:
            e1, e2, e3 = d.detuned.e1, d.detuned.e2, complex(d.detuned.e3)
        points.append(DetuningPoint(delta=float(delta), e1=e1, e2=e2, e3=e3, split_kind=d.split_kind))
    logger.info("Detuning scan finished", extra={"family": str(Family(family)), "points": len(points)})
    return points
