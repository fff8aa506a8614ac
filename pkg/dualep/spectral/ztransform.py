"""Unilateral Z transforms ``Σ_{t≥0} C(t) z^{-t}`` and Fourier profiles.

Closed forms follow from summing the geometric series of each decay mode;
the Fourier profile is the transform on ``z = e^{-2iω}``.
"""

import logging
from collections.abc import Iterable
from collections.abc import Sequence

import numpy as np
import numpy.typing as npt

from dualep.circuits.models import CorrelationSeries
from dualep.conf import settings
from dualep.exceptions import ParameterError
from dualep.families.models import DegenerateSpectrumError
from dualep.families.models import Ep2Derived
from dualep.families.models import Ep3Derived
from dualep.families.models import SplitKind
from dualep.families.services import Derived
from dualep.spectral.models import FourierProfile
from dualep.spectral.models import NonConvergentSpectrumError
from dualep.spectral.models import Pole
from dualep.spectral.models import PoleProximityError
from dualep.spectral.models import PoleReport
from dualep.spectral.models import TransformKind
from dualep.spectral.models import ZGrid

logger = logging.getLogger(__name__)

# Multiple of machine epsilon charged per summed term in the recorded bound.
ROUNDING_FACTOR = 64


def transform_kind(d: Derived) -> TransformKind:
    if isinstance(d, Ep2Derived):
        return TransformKind.EP2 if d.delta == 0 else TransformKind.EP2_DETUNED
    return TransformKind.EP3 if d.delta == 0 else TransformKind.EP3_DETUNED


def _check_kind(kind: TransformKind | str, d: Derived) -> TransformKind:
    kind = TransformKind(kind)
    expected = transform_kind(d)
    if kind is not expected:
        msg = f"Parameters describe {expected}, not {kind}"
        raise ParameterError(msg)
    return kind


def pole_report(d: Derived) -> PoleReport:
    """
    Poles of the closed-form transform, read off the family structure.

    At the exceptional point a single pole carries the Jordan block order
    (2 for ep2, 3 for ep3). Away from it every mode gives a simple pole at
    ``E_i²``; when the split vanishes the pair is reported as one double pole.
    """
    kind = transform_kind(d)
    if isinstance(d, Ep2Derived):
        if d.spectrum is None:
            poles = (Pole(complex(d.r1**2), 2),)
        elif d.spectrum.split_kind is SplitKind.EXCEPTIONAL:
            poles = (Pole(complex(d.spectrum.e1**2), 2),)
        else:
            poles = (Pole(complex(d.spectrum.e1**2), 1), Pole(complex(d.spectrum.e2**2), 1))
    elif d.detuned is None:
        poles = (Pole(complex(d.r**2), 3),)
    elif d.detuned.split_kind is SplitKind.EXCEPTIONAL:
        poles = (Pole(complex(d.detuned.e1**2), 2), Pole(complex(d.r**2), 1))
    else:
        poles = (
            Pole(complex(d.detuned.e1**2), 1),
            Pole(complex(d.detuned.e2**2), 1),
            Pole(complex(d.r**2), 1),
        )
    return PoleReport(kind=kind, poles=poles)


def _guard_poles(report: PoleReport, z: complex) -> None:
    limit = getattr(settings, "POLE_DISTANCE", 1e-12)
    for pole in report.poles:
        if abs(z - pole.location) <= limit:
            msg = f"z = {z} lies within {limit:.1e} of the pole at {pole.location}"
            raise PoleProximityError(msg, pole.location)


def _ep2(d: Ep2Derived, z: complex) -> complex:
    if d.spectrum is None:
        return 2 * d.l * d.r1 * z / (z - d.r1**2) ** 2
    s = d.spectrum
    if s.split_kind is SplitKind.EXCEPTIONAL:
        msg = f"Δ = 0 at δ = {d.delta!r}; the detuned ep2 transform is singular"
        raise DegenerateSpectrumError(msg)
    return s.l_prime * z / s.delta_cap * (1 / (z - s.e1**2) - 1 / (z - s.e2**2))


def _ep3(d: Ep3Derived, z: complex) -> complex:
    if d.detuned is None:
        w = d.r**2
        return 2 * d.l2 * d.r * z / (z - w) ** 2 + d.l1**2 * z * (z + 3 * w) / (z - w) ** 3
    m = d.detuned
    if m.split_kind is SplitKind.EXCEPTIONAL:
        msg = f"Δ' = 0 at δ = {d.delta!r}; the detuned ep3 transform is singular"
        raise DegenerateSpectrumError(msg)
    return z * (m.a1 / (z - m.e1**2) + m.a2 / (z - m.e2**2) + m.a3 / (z - m.e3**2))


def z_closed(kind: TransformKind | str, d: Derived, z: complex) -> complex:
    """
    Closed-form transform of ``C^{xz}`` at ``z``.

    Raises:
        ParameterError: If ``kind`` does not describe ``d``
        PoleProximityError: If ``z`` is within ``POLE_DISTANCE`` of a pole
        DegenerateSpectrumError: For a detuned bundle whose split vanished
    """
    _check_kind(kind, d)
    z = complex(z)
    _guard_poles(pole_report(d), z)
    if isinstance(d, Ep2Derived):
        return _ep2(d, z)
    return _ep3(d, z)


def _tail_bounds(values: npt.NDArray, z: npt.NDArray[np.complex128]) -> npt.NDArray[np.float64]:
    magnitudes = np.abs(values)
    n = len(values)
    if n == 0:
        return np.zeros(len(z))
    window = max(1, n // 4)
    late = float(np.max(magnitudes[n - window :]))
    early = float(np.max(magnitudes[max(0, n - 2 * window) : n - window])) if n > window else 0.0
    if late == 0:
        return np.zeros(len(z))
    # Root test on the envelope: late ≈ early · ρ^window.
    rho = (late / early) ** (1 / window) if early > 0 else np.inf
    radius = np.abs(z)
    q = rho / radius
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        truncation = late * radius ** (-(n - 1)) / (1 - q)
    return np.where(q < 1, truncation, np.inf)


def z_numeric(
    series: CorrelationSeries | Sequence[float],
    grid: Iterable[complex],
    t_max: int | None = None,
    poles: Iterable[complex] = (),
) -> ZGrid:
    """
    Partial sums of the transform, truncated at ``t_max``.

    Args:
        series: ``C(t)`` for ``t = 0, 1, ...``
        grid: Points ``z``
        t_max: Last term summed, defaults to the end of the series
        poles: Declared poles; grid points within ``POLE_DISTANCE`` of one are dropped

    Returns:
        The sums with a per-point bound on the truncation and rounding error.
    """
    values = np.asarray(series.values if isinstance(series, CorrelationSeries) else series, dtype=np.complex128)
    if t_max is not None:
        values = values[: t_max + 1]
    points = np.asarray(list(grid), dtype=np.complex128)

    limit = getattr(settings, "POLE_DISTANCE", 1e-12)
    poles = list(poles)
    keep = np.ones(len(points), dtype=bool)
    for pole in poles:
        keep &= np.abs(points - pole) > limit
    if not keep.all():
        logger.info("Dropped grid points on declared poles", extra={"dropped": int((~keep).sum())})
    points = points[keep]

    powers = points[:, None] ** -np.arange(len(values))[None, :]
    terms = values[None, :] * powers
    sums = terms.sum(axis=1)
    rounding = ROUNDING_FACTOR * np.finfo(float).eps * np.abs(terms).sum(axis=1)
    bounds = _tail_bounds(values, points) + rounding
    return ZGrid(points=points, values=sums, truncation=len(values) - 1, tail_bounds=bounds)


def default_omegas(n_points: int | None = None) -> npt.NDArray[np.float64]:
    n_points = getattr(settings, "DFT_POINTS", 512) if n_points is None else n_points
    return np.linspace(0, np.pi, n_points, endpoint=False)


def dft_profile(
    kind: TransformKind | str,
    d: Derived,
    omegas: Iterable[float] | None = None,
) -> FourierProfile:
    """
    Closed-form profile ``f(ω) = Z(e^{-2iω})``.

    Raises:
        NonConvergentSpectrumError: If any pole lies on or outside the unit circle
    """
    _check_kind(kind, d)
    report = pole_report(d)
    outside = [p.location for p in report.poles if abs(p.location) >= 1]
    if outside:
        msg = f"Fourier profile needs every pole inside the unit circle, got {outside}"
        raise NonConvergentSpectrumError(msg)
    omegas = default_omegas() if omegas is None else np.asarray(list(omegas), dtype=np.float64)
    values = [z_closed(kind, d, np.exp(-2j * w)) for w in omegas]
    return FourierProfile(omegas=omegas, values=values)


def dft_numeric(series: CorrelationSeries | Sequence[float], omegas: Iterable[float] | None = None) -> FourierProfile:
    """Profile of a truncated series, summed directly on the unit circle."""
    omegas = default_omegas() if omegas is None else np.asarray(list(omegas), dtype=np.float64)
    grid = z_numeric(series, np.exp(-2j * omegas))
    return FourierProfile(omegas=omegas, values=grid.values)


def capped_log10(values: npt.ArrayLike, cap: float | None = None) -> npt.NDArray[np.float64]:
    """``log10|v|`` clipped to ``Z_LOG_CAP`` so divergences stay finite in CSV output."""
    cap = getattr(settings, "Z_LOG_CAP", 16.0) if cap is None else cap
    with np.errstate(divide="ignore"):
        logs = np.log10(np.abs(np.asarray(values, dtype=np.complex128)))
    return np.clip(np.nan_to_num(logs, nan=cap, posinf=cap, neginf=-cap), -cap, cap)
