import math
from enum import StrEnum
from typing import Any

import numpy as np
import numpy.typing as npt
from attrs import define
from attrs import field

from dualep.exceptions import DualEPError
from dualep.exceptions import ParameterError
from dualep.exceptions import SelfCheckError


class InadmissibleParameterError(ParameterError):
    """Exception raised when family angles fall outside their admissible window."""


class NoAdmissibleRootError(InadmissibleParameterError):
    """Exception raised when the cubic for cos 2φ has no admissible root."""


class UnsupportedChannelError(ParameterError):
    """Exception raised for a Pauli channel without a closed form."""


class DegenerateSpectrumError(DualEPError):
    """Exception raised when a detuned formula is evaluated exactly at the EP."""


class TransferSelfCheckError(SelfCheckError):
    """Exception raised when a constructed gate misses its closed-form transfer matrix."""

    def __init__(self, message: str, residual: npt.NDArray[np.float64]) -> None:
        super().__init__(message)
        self.residual = residual


class Family(StrEnum):
    EP2 = "ep2"
    EP3 = "ep3"


class SplitKind(StrEnum):
    """How the coalesced eigenvalues behave at a given detuning."""

    EXCEPTIONAL = "exceptional"
    REAL = "real"
    COMPLEX = "complex"


# Angles closer than this to a forbidden value are treated as equal to it.
ANGLE_TOL = 1e-12
# Angles typed with four decimals still name the forbidden point they round to.
ROUNDED_ANGLE_TOL = 1e-3


def _complex_json(z: complex) -> list[float]:
    return [z.real, z.imag]


def _not_quarter_pi_multiple(instance, attribute, value) -> None:  # noqa: ARG001
    if abs(math.remainder(value, math.pi / 4)) < ANGLE_TOL:
        msg = f"Φ ≠ nπ/4 is required, got Φ = {value!r}"
        raise InadmissibleParameterError(msg)


def _tan_window(instance, attribute, value) -> None:  # noqa: ARG001
    # Φ mod π/2 must lie in (0, π/8] ∪ [3π/8, π/2), i.e. |tan 2Φ| ≤ 1.
    slope = abs(math.tan(2 * value))
    if slope > 1 + ANGLE_TOL:
        reduced = value % (math.pi / 2)
        if abs(reduced - math.pi / 4) < ROUNDED_ANGLE_TOL:
            msg = f"Φ ≠ nπ/4 is required, got Φ = {value!r} (|tan 2Φ| = {slope:.3g})"
            raise InadmissibleParameterError(msg)
        msg = (
            f"|tan 2Φ| ≤ 1 is required so that J is real; "
            f"Φ mod π/2 = {reduced:.6f} lies in (π/8, 3π/8)"
        )
        raise InadmissibleParameterError(msg)


def _finite(instance, attribute, value) -> None:  # noqa: ARG001
    if not math.isfinite(value):
        msg = f"{attribute.name} must be finite, got {value!r}"
        raise InadmissibleParameterError(msg)


@define(frozen=True)
class Ep2Config:
    """Inputs of the second-order family: Φ and the detuning δ."""

    phi_big: float = field(converter=float, validator=[_finite, _not_quarter_pi_multiple, _tan_window])
    delta: float = field(default=0.0, converter=float, validator=_finite)

    @property
    def detuned(self) -> bool:
        return self.delta != 0.0


@define(frozen=True)
class Ep3Config:
    """Inputs of the third-order family: Φ and the detuning δ."""

    phi_big: float = field(converter=float, validator=[_finite, _not_quarter_pi_multiple])
    delta: float = field(default=0.0, converter=float, validator=_finite)

    @property
    def detuned(self) -> bool:
        return self.delta != 0.0


@define(frozen=True)
class Ep2Spectrum:
    """Eigenvalues of the detuned second-order matrix."""

    e1: complex
    e2: complex
    e3: float
    e4: float
    delta_cap: complex
    l_prime: float
    split_kind: SplitKind

    def to_json(self) -> dict[str, Any]:
        return {
            "E1": _complex_json(self.e1),
            "E2": _complex_json(self.e2),
            "E3": self.e3,
            "E4": self.e4,
            "Delta": _complex_json(self.delta_cap),
            "l_prime": self.l_prime,
            "split_kind": str(self.split_kind),
        }


@define(frozen=True)
class Ep2Derived:
    """
    Solved second-order family.

    ``phi_small = Φ - π/4 - δ`` and ``J = ½ arcsin(tan² 2Φ)``; ``r1``, ``r2``
    and ``l`` are the entries of the undetuned matrix. ``spectrum`` is only
    set when δ ≠ 0.
    """

    config: Ep2Config
    phi_small: float
    j: float
    r1: float
    r2: float
    l: float  # noqa: E741
    spectrum: Ep2Spectrum | None = None

    @property
    def family(self) -> Family:
        return Family.EP2

    @property
    def delta(self) -> float:
        return self.config.delta

    @property
    def split_kind(self) -> SplitKind:
        return self.spectrum.split_kind if self.spectrum else SplitKind.EXCEPTIONAL

    def to_json(self) -> dict[str, Any]:
        return {
            "family": str(self.family),
            "Phi": self.config.phi_big,
            "delta": self.config.delta,
            "phi": self.phi_small,
            "J": self.j,
            "r1": self.r1,
            "r2": self.r2,
            "l": self.l,
            "split_kind": str(self.split_kind),
            "spectrum": self.spectrum.to_json() if self.spectrum else None,
        }


@define(frozen=True)
class Ep3Detuned:
    """Detuned third-order matrix entries, eigenvalues and mode amplitudes."""

    r1p: float
    r2p: float
    l3: float
    l4: float
    e1: complex
    e2: complex
    e3: float
    e4: float
    delta_cap_p: complex
    a1: complex
    a2: complex
    a3: float
    split_kind: SplitKind

    def to_json(self) -> dict[str, Any]:
        return {
            "r1_prime": self.r1p,
            "r2_prime": self.r2p,
            "l3": self.l3,
            "l4": self.l4,
            "E1": _complex_json(self.e1),
            "E2": _complex_json(self.e2),
            "E3": self.e3,
            "E4": self.e4,
            "Delta_prime": _complex_json(self.delta_cap_p),
            "A1": _complex_json(self.a1),
            "A2": _complex_json(self.a2),
            "A3": self.a3,
            "split_kind": str(self.split_kind),
        }


@define(frozen=True)
class Ep3Derived:
    """
    Solved third-order family.

    ``varphi`` is the output z-rotation angle, ``psi = varphi - π/4 - δ`` the
    input one. ``r``, ``l1`` and ``l2`` are the entries of the undetuned
    matrix; ``detuned`` is only set when δ ≠ 0.
    """

    config: Ep3Config
    psi: float
    phi_small: float
    varphi: float
    j: float
    r: float
    l1: float
    l2: float
    detuned: Ep3Detuned | None = None

    @property
    def family(self) -> Family:
        return Family.EP3

    @property
    def delta(self) -> float:
        return self.config.delta

    @property
    def split_kind(self) -> SplitKind:
        return self.detuned.split_kind if self.detuned else SplitKind.EXCEPTIONAL

    def to_json(self) -> dict[str, Any]:
        return {
            "family": str(self.family),
            "Phi": self.config.phi_big,
            "delta": self.config.delta,
            "Psi": self.psi,
            "phi": self.phi_small,
            "varphi": self.varphi,
            "J": self.j,
            "r": self.r,
            "l1": self.l1,
            "l2": self.l2,
            "split_kind": str(self.split_kind),
            "detuned": self.detuned.to_json() if self.detuned else None,
        }


@define(frozen=True)
class DetuningPoint:
    """One sample of an eigenvalue trajectory through the exceptional point."""

    delta: float
    e1: complex
    e2: complex
    e3: complex
    split_kind: SplitKind

    def to_row(self) -> list[float | str]:
        return [
            self.delta,
            self.e1.real,
            self.e1.imag,
            self.e2.real,
            self.e2.imag,
            self.e3.real,
            self.e3.imag,
            str(self.split_kind),
        ]
