import math
from enum import StrEnum
from typing import Any

import numpy as np
import numpy.typing as npt
from attrs import define
from attrs import field

from dualep.exceptions import DualEPError
from dualep.exceptions import ParameterError


class PoleProximityError(ParameterError):
    """Exception raised when a closed form is evaluated on top of a pole."""

    def __init__(self, message: str, pole: complex) -> None:
        super().__init__(message)
        self.pole = pole


class NonConvergentSpectrumError(ParameterError):
    """Exception raised when a pole lies on or outside the unit circle."""


class FitError(DualEPError):
    """Exception raised when a decay model cannot be fitted."""

    def __init__(self, message: str, diagnostics: dict[str, Any] | None = None) -> None:
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class TransformKind(StrEnum):
    EP2 = "ep2"
    EP2_DETUNED = "ep2_detuned"
    EP3 = "ep3"
    EP3_DETUNED = "ep3_detuned"


class ModelKind(StrEnum):
    PURE_EXP = "pure_exp"
    LINEAR_EXP = "linear_exp"
    QUAD_EXP = "quad_exp"
    TWO_MODE = "two_mode"

    @property
    def n_params(self) -> int:
        return {"pure_exp": 2, "linear_exp": 2, "quad_exp": 3, "two_mode": 4}[self.value]


def _complex_array(values: npt.ArrayLike) -> npt.NDArray[np.complex128]:
    return np.asarray(values, dtype=np.complex128)


def _float_array(values: npt.ArrayLike) -> npt.NDArray[np.float64]:
    return np.asarray(values, dtype=np.float64)


@define(frozen=True, eq=False)
class ZGrid:
    """
    Partial sums of ``Σ_{t≥0} C(t) z^{-t}`` on a set of points.

    ``tail_bounds[i]`` bounds the truncation error at ``points[i]`` plus the
    rounding of the sum itself; it is infinite where the sum diverges.
    """

    points: npt.NDArray[np.complex128] = field(converter=_complex_array)
    values: npt.NDArray[np.complex128] = field(converter=_complex_array)
    truncation: int
    tail_bounds: npt.NDArray[np.float64] = field(converter=_float_array)

    @property
    def converged(self) -> npt.NDArray[np.bool_]:
        return np.isfinite(self.tail_bounds)


@define(frozen=True, eq=False)
class FourierProfile:
    """``f(ω)`` on ``ω ∈ [0, π)``; ``f(ω)`` is the transform at ``z = e^{-2iω}``."""

    omegas: npt.NDArray[np.float64] = field(converter=_float_array)
    values: npt.NDArray[np.complex128] = field(converter=_complex_array)

    @property
    def amplitude(self) -> npt.NDArray[np.float64]:
        return np.abs(self.values)


@define(frozen=True)
class Pole:
    location: complex
    order: int

    @property
    def is_real(self) -> bool:
        return abs(self.location.imag) < 1e-12

    def to_json(self) -> dict[str, Any]:
        return {
            "location": [self.location.real, self.location.imag],
            "order": self.order,
            "real": self.is_real,
        }


@define(frozen=True)
class PoleReport:
    kind: TransformKind
    poles: tuple[Pole, ...]

    @property
    def max_order(self) -> int:
        return max(p.order for p in self.poles)

    def to_json(self) -> dict[str, Any]:
        return {
            "kind": str(self.kind),
            "poles": [p.to_json() for p in self.poles],
            "max_order": self.max_order,
        }


@define(frozen=True)
class FitResult:
    """
    A fitted decay model.

    The base is fixed to ``b = e``, so ``b^{-c} = e^{-c}`` is the per-step
    decay factor. ``method`` is ``"log"`` for log-space linear fits and
    ``"lm"`` for Levenberg-Marquardt on the raw model.
    """

    model: ModelKind
    params: dict[str, float]
    residual_rms: float
    r_squared: float
    method: str = "lm"

    @property
    def decay_factor(self) -> float:
        if "c" in self.params:
            return math.exp(-self.params["c"])
        return max(abs(self.params["lambda1"]), abs(self.params["lambda2"]))

    def to_json(self) -> dict[str, Any]:
        return {
            "model": str(self.model),
            "params": self.params,
            "residual_rms": self.residual_rms,
            "r_squared": self.r_squared,
            "method": self.method,
        }
