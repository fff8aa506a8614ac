"""Decay-model fits for correlation series.

Models, all with the base fixed to ``b = e``:

    pure_exp     a·e^{-ct}
    linear_exp   a·t·e^{-ct}
    quad_exp     (a1·t + a2·t²)·e^{-ct}
    two_mode     A1·λ1^t + A2·λ2^t

The single-term models are first fitted as straight lines in log space when
the data have one sign; every model is then refined by Levenberg-Marquardt on
the raw residuals and the better of the two candidates is kept.
"""

import logging
import math
from collections.abc import Iterable
from collections.abc import Sequence

import numpy as np
import numpy.typing as npt
from scipy.optimize import least_squares

from dualep.circuits.models import CorrelationSeries
from dualep.conf import settings
from dualep.exceptions import ParameterError
from dualep.spectral.models import FitError
from dualep.spectral.models import FitResult
from dualep.spectral.models import ModelKind

logger = logging.getLogger(__name__)

type Vec = npt.NDArray[np.float64]

PARAM_NAMES = {
    ModelKind.PURE_EXP: ("a", "c"),
    ModelKind.LINEAR_EXP: ("a", "c"),
    ModelKind.QUAD_EXP: ("a1", "a2", "c"),
    ModelKind.TWO_MODE: ("A1", "lambda1", "A2", "lambda2"),
}


def evaluate(model: ModelKind | str, params: Sequence[float], t: Vec) -> Vec:
    model = ModelKind(model)
    t = np.asarray(t, dtype=np.float64)
    if model is ModelKind.PURE_EXP:
        a, c = params
        return a * np.exp(-c * t)
    if model is ModelKind.LINEAR_EXP:
        a, c = params
        return a * t * np.exp(-c * t)
    if model is ModelKind.QUAD_EXP:
        a1, a2, c = params
        return (a1 * t + a2 * t**2) * np.exp(-c * t)
    amp1, lam1, amp2, lam2 = params
    return amp1 * np.power(lam1, t) + amp2 * np.power(lam2, t)


def _line_fit(t: Vec, y: Vec, prefactor: Vec) -> tuple[float, float] | None:
    """Fit ``ln|y/prefactor| = ln|a| - c·t``; None when signs are mixed or data vanish."""
    mask = prefactor != 0
    t, y, prefactor = t[mask], y[mask], prefactor[mask]
    scaled = y / prefactor
    if len(scaled) < 2 or np.any(scaled == 0) or not (np.all(scaled > 0) or np.all(scaled < 0)):
        return None
    slope, intercept = np.polyfit(t, np.log(np.abs(scaled)), 1)
    return float(np.sign(scaled[0]) * np.exp(intercept)), float(-slope)


def _loose_line_fit(t: Vec, y: Vec, prefactor: Vec) -> tuple[float, float]:
    """Log-space start for mixed-sign data: fit the magnitudes of the nonzero points."""
    mask = (prefactor != 0) & (y != 0)
    if mask.sum() < 2:
        return float(y[np.argmax(np.abs(y))]), 0.1
    slope, intercept = np.polyfit(t[mask], np.log(np.abs(y[mask] / prefactor[mask])), 1)
    lead = y[mask][np.argmax(np.abs(y[mask]))]
    return float(np.sign(lead) * np.exp(intercept)), float(-slope)


def _amplitudes(columns: list[Vec], y: Vec) -> Vec:
    design = np.stack(columns, axis=1)
    coeffs, *_ = np.linalg.lstsq(design, y, rcond=None)
    return coeffs


def _prony_rates(y: Vec) -> tuple[float, float]:
    if len(y) < 4:
        return 0.9, 0.5
    design = np.stack([y[1:-1], y[:-2]], axis=1)
    (p, q), *_ = np.linalg.lstsq(design, y[2:], rcond=None)
    roots = np.roots([1.0, -p, -q])
    if np.iscomplexobj(roots) and np.any(np.abs(roots.imag) > 0):
        # A complex pair cannot be represented with real rates; start from its modulus.
        modulus = float(np.abs(roots[0]))
        return modulus, float(roots[0].real)
    lam1, lam2 = sorted(roots.real, key=abs, reverse=True)
    if math.isclose(lam1, lam2):
        lam2 = 0.5 * lam1
    return float(lam1), float(lam2)


def _initial(model: ModelKind, t: Vec, y: Vec) -> tuple[list[float], list[float] | None]:
    """Return a start for Levenberg-Marquardt and, when available, an exact log-space fit."""
    ones = np.ones_like(t)
    if model is ModelKind.PURE_EXP:
        exact = _line_fit(t, y, ones)
        start = exact or _loose_line_fit(t, y, ones)
        return list(start), list(exact) if exact else None
    if model is ModelKind.LINEAR_EXP:
        exact = _line_fit(t, y, t)
        start = exact or _loose_line_fit(t, y, t)
        return list(start), list(exact) if exact else None
    if model is ModelKind.QUAD_EXP:
        _, c = _line_fit(t, y, t) or _loose_line_fit(t, y, t)
        decay = np.exp(-c * t)
        a1, a2 = _amplitudes([t * decay, t**2 * decay], y)
        return [float(a1), float(a2), c], None
    lam1, lam2 = _prony_rates(y)
    amp1, amp2 = _amplitudes([np.power(lam1, t), np.power(lam2, t)], y)
    return [float(amp1), lam1, float(amp2), lam2], None


def _rms(model: ModelKind, params: Sequence[float], t: Vec, y: Vec) -> float:
    return float(np.sqrt(np.mean((evaluate(model, params, t) - y) ** 2)))


def _r_squared(model: ModelKind, params: Sequence[float], t: Vec, y: Vec) -> float:
    ss_res = float(np.sum((evaluate(model, params, t) - y) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    if ss_tot == 0:
        return 1.0 if ss_res == 0 else 0.0
    return min(1.0, 1 - ss_res / ss_tot)


def _result(model: ModelKind, params: Sequence[float], t: Vec, y: Vec, method: str) -> FitResult:
    named = dict(zip(PARAM_NAMES[model], (float(p) for p in params), strict=True))
    if model is not ModelKind.TWO_MODE:
        named["b"] = math.e
    return FitResult(
        model=model,
        params=named,
        residual_rms=_rms(model, params, t, y),
        r_squared=_r_squared(model, params, t, y),
        method=method,
    )


def fit_decay(series: CorrelationSeries | Sequence[float], model: ModelKind | str) -> FitResult:
    """
    Least-squares fit of one decay model.

    Args:
        series: ``C(t)``; a plain sequence is read as ``t = 0, 1, ...``
        model: Model to fit

    Returns:
        The fit with its root-mean-square residual and ``R²``.

    Raises:
        ParameterError: If the series has no more points than the model has
            parameters, or is identically zero
        FitError: If Levenberg-Marquardt does not converge within
            ``FIT_MAX_ITERATIONS`` and no log-space fit exists
    """
    model = ModelKind(model)
    if isinstance(series, CorrelationSeries):
        t = np.asarray(series.times, dtype=np.float64)
        y = np.asarray(series.values, dtype=np.float64)
    else:
        y = np.asarray(series, dtype=np.float64)
        t = np.arange(len(y), dtype=np.float64)
    if len(y) <= model.n_params:
        msg = f"{model} needs more than {model.n_params} points, got {len(y)}"
        raise ParameterError(msg)
    if not np.any(y):
        msg = "Cannot fit a decay model to an identically zero series"
        raise ParameterError(msg)

    start, exact = _initial(model, t, y)
    candidates = []
    if exact is not None:
        candidates.append(_result(model, exact, t, y, "log"))

    iterations = getattr(settings, "FIT_MAX_ITERATIONS", 200)
    refined = least_squares(
        lambda p: evaluate(model, p, t) - y,
        x0=np.asarray(start, dtype=np.float64),
        method="lm",
        xtol=1e-15,
        ftol=1e-15,
        gtol=1e-15,
        max_nfev=iterations * (model.n_params + 1),
    )
    if refined.success and np.all(np.isfinite(refined.x)):
        candidates.append(_result(model, refined.x, t, y, "lm"))
    elif not candidates:
        diagnostics = {
            "model": str(model),
            "status": int(refined.status),
            "message": str(refined.message),
            "nfev": int(refined.nfev),
            "start": start,
        }
        msg = f"{model} fit did not converge after {refined.nfev} evaluations: {refined.message}"
        raise FitError(msg, diagnostics)

    best = min(candidates, key=lambda r: r.residual_rms)
    logger.debug(
        "Fitted decay model",
        extra={"model": str(model), "method": best.method, "residual_rms": best.residual_rms},
    )
    return best


def compare_fits(
    series: CorrelationSeries | Sequence[float],
    models: Iterable[ModelKind | str] | None = None,
) -> list[FitResult]:
    """Fit several models and sort them by residual; models that cannot be fitted are logged and skipped."""
    results = []
    for model in models or list(ModelKind):
        try:
            results.append(fit_decay(series, model))
        except (FitError, ParameterError) as exc:
            logger.warning("Skipping decay model", extra={"model": str(model), "reason": str(exc)})
    return sorted(results, key=lambda r: r.residual_rms)
