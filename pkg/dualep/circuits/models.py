from enum import StrEnum
from typing import Any

from attrs import define
from attrs import field

from dualep.conf import settings
from dualep.exceptions import ParameterError
from dualep.families.models import Ep2Derived
from dualep.families.models import Ep3Derived
from dualep.linalg.pauli import PauliIndex

# Correlators of normalized Paulis are bounded by one up to rounding.
VALUE_BOUND_TOL = 1e-9


class RingSizeError(ParameterError):
    """Exception raised when a ring is too small or too large for dense evolution."""


class SiteRangeError(ParameterError):
    """Exception raised for a qubit index outside the ring."""


class SeriesError(ParameterError):
    """Exception raised for malformed correlation series."""


class Source(StrEnum):
    ANALYTIC = "analytic"
    TRANSFER = "transfer"
    CIRCUIT = "circuit"
    FLOQUET = "floquet"


class Boundary(StrEnum):
    PERIODIC = "periodic"
    OPEN = "open"


class FloquetFamily(StrEnum):
    JORDAN2 = "jordan2"
    JORDAN3 = "jordan3"


def _half_sites(instance, attribute, value) -> None:  # noqa: ARG001
    limit = getattr(settings, "MAX_HALF_SITES", 7)
    if not 1 <= value <= limit:
        msg = f"Ring half-size L must satisfy 1 ≤ L ≤ {limit}, got L = {value}"
        raise RingSizeError(msg)


@define(frozen=True)
class RingSpec:
    """
    Ring of ``2L`` qubits; qubit 0 is the most significant bit.

    ``Boundary.OPEN`` drops the wrap-around bond ``(2L-1, 0)``. The open chain
    is the geometry the circuit oracle runs on: a light-cone edge starting at
    qubit 1 then stays exact up to ``t = L - 1``, while on the periodic ring
    the two fronts meet once ``4t ≥ 2L``.
    """

    half_sites: int = field(converter=int, validator=_half_sites)
    boundary: Boundary = field(default=Boundary.PERIODIC, converter=Boundary)

    @property
    def n_qubits(self) -> int:
        return 2 * self.half_sites

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    @property
    def periodic(self) -> bool:
        return self.boundary is Boundary.PERIODIC

    @property
    def max_lightcone_time(self) -> int:
        """Largest ``t`` for which the light-cone edge is free of boundary effects."""
        if self.periodic:
            return (self.half_sites - 1) // 2
        return self.half_sites - 1

    def odd_bonds(self) -> list[tuple[int, int]]:
        return [(q, q + 1) for q in range(0, self.n_qubits, 2)]

    def even_bonds(self) -> list[tuple[int, int]]:
        last = self.n_qubits if self.periodic else self.n_qubits - 1
        return [(q, (q + 1) % self.n_qubits) for q in range(1, last, 2)]

    def check_site(self, site: int) -> int:
        """
        Validate a qubit index.

        Raises:
            SiteRangeError: If ``site`` is not in ``0..2L-1``
        """
        if not 0 <= site < self.n_qubits:
            msg = f"Site {site} is outside the ring of {self.n_qubits} qubits"
            raise SiteRangeError(msg)
        return site


@define(frozen=True)
class FloquetSpec:
    """
    Kicked XXZ chain whose half periods reproduce a family gate on every bond.

    ``psi`` and ``varphi`` are the z kicks and stay zero for ``jordan2``.
    """

    family: FloquetFamily = field(converter=FloquetFamily)
    phi_big: float
    phi_small: float
    j: float
    ring: RingSpec
    psi: float = 0.0
    varphi: float = 0.0

    @classmethod
    def from_ep2(cls, d: Ep2Derived, ring: RingSpec) -> "FloquetSpec":
        return cls(
            family=FloquetFamily.JORDAN2,
            phi_big=d.config.phi_big,
            phi_small=d.phi_small,
            j=d.j,
            ring=ring,
        )

    @classmethod
    def from_ep3(cls, d: Ep3Derived, ring: RingSpec) -> "FloquetSpec":
        return cls(
            family=FloquetFamily.JORDAN3,
            phi_big=d.config.phi_big,
            phi_small=d.phi_small,
            j=d.j,
            ring=ring,
            psi=d.psi,
            varphi=d.varphi,
        )

    @classmethod
    def from_derived(cls, d: Ep2Derived | Ep3Derived, ring: RingSpec) -> "FloquetSpec":
        if isinstance(d, Ep2Derived):
            return cls.from_ep2(d, ring)
        return cls.from_ep3(d, ring)


def _times_increasing(instance, attribute, value) -> None:  # noqa: ARG001
    if any(b <= a for a, b in zip(value, value[1:], strict=False)):
        msg = "Series times must be strictly increasing"
        raise SeriesError(msg)


def _bounded(instance, attribute, value) -> None:  # noqa: ARG001
    if len(value) != len(instance.times):
        msg = f"Series has {len(instance.times)} times but {len(value)} values"
        raise SeriesError(msg)
    worst = max((abs(v) for v in value), default=0.0)
    if worst > 1 + VALUE_BOUND_TOL:
        msg = f"Correlator magnitude {worst:.6g} exceeds 1"
        raise SeriesError(msg)


@define(frozen=True)
class CorrelationSeries:
    """
    ``C(t)`` for one Pauli pair.

    ``metadata`` carries the family, detuning and ring data used to produce
    the values and is written verbatim into the JSON form.
    """

    alpha: PauliIndex = field(converter=PauliIndex.parse)
    beta: PauliIndex = field(converter=PauliIndex.parse)
    times: tuple[int, ...] = field(converter=tuple, validator=_times_increasing)
    values: tuple[float, ...] = field(converter=lambda vs: tuple(float(v) for v in vs), validator=_bounded)
    source: Source = field(default=Source.ANALYTIC, converter=Source)
    metadata: dict[str, Any] = field(factory=dict)

    @property
    def channel(self) -> str:
        return f"{self.alpha.label}{self.beta.label}"

    def __len__(self) -> int:
        return len(self.times)
