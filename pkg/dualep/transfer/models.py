from enum import StrEnum
from typing import Any

import numpy as np
import numpy.typing as npt
from attrs import define
from attrs import field

from dualep.linalg.kernel import DimensionError
from dualep.linalg.kernel import RMat


class Direction(StrEnum):
    PLUS = "plus"
    MINUS = "minus"


class ErgodicityClass(StrEnum):
    NONINTERACTING = "noninteracting"
    NONERGODIC = "nonergodic"
    ERGODIC_NONMIXING = "ergodic_nonmixing"
    ERGODIC_MIXING = "ergodic_mixing"


def _as_rmat(m: npt.ArrayLike) -> RMat:
    return np.asarray(m, dtype=np.float64)


def _four_by_four(instance, attribute, value) -> None:  # noqa: ARG001
    if value.shape != (4, 4):
        msg = f"Transfer matrix must be 4x4, got shape {value.shape}"
        raise DimensionError(msg)


@define(frozen=True, eq=False)
class TransferMatrix:
    """
    Pauli transfer matrix of a light-cone map, basis order (1, x, y, z).

    ``entries[a][b] = ½ tr[σ_a M(σ_b)]``, so column ``b`` holds the image of
    ``σ_b``. ``dual_unitary`` is False when the source gate failed the
    dual-unitarity check; such matrices are still usable for powers but not
    for classification.
    """

    entries: RMat = field(converter=_as_rmat, validator=_four_by_four)
    direction: Direction = Direction.PLUS
    dual_unitary: bool = True

    def power(self, n: int) -> RMat:
        return np.linalg.matrix_power(self.entries, n)

    def to_json(self) -> dict[str, Any]:
        return {
            "direction": str(self.direction),
            "dual_unitary": self.dual_unitary,
            "entries": self.entries.tolist(),
        }


@define(frozen=True)
class JordanCluster:
    eigenvalue: complex
    algebraic_mult: int
    geometric_mult: int
    block_sizes: tuple[int, ...]

    @property
    def is_exceptional(self) -> bool:
        return max(self.block_sizes) >= 2

    def to_json(self) -> dict[str, Any]:
        return {
            "eigenvalue": [self.eigenvalue.real, self.eigenvalue.imag],
            "algebraic_mult": self.algebraic_mult,
            "geometric_mult": self.geometric_mult,
            "block_sizes": list(self.block_sizes),
        }


@define(frozen=True)
class JordanReport:
    clusters: tuple[JordanCluster, ...]
    tolerance_used: float
    ambiguous: bool = False

    @property
    def has_exceptional_point(self) -> bool:
        return any(c.is_exceptional for c in self.clusters)

    @property
    def max_block_size(self) -> int:
        return max(max(c.block_sizes) for c in self.clusters)

    def cluster_at(self, eigenvalue: complex, tol: float = 1e-6) -> JordanCluster:
        """
        Return the cluster whose eigenvalue lies within ``tol`` of ``eigenvalue``.

        Raises:
            KeyError: If no cluster is that close
        """
        for cluster in self.clusters:
            if abs(cluster.eigenvalue - eigenvalue) < tol:
                return cluster
        msg = f"No eigenvalue cluster near {eigenvalue}"
        raise KeyError(msg)

    def to_json(self) -> dict[str, Any]:
        return {
            "clusters": [c.to_json() for c in self.clusters],
            "tolerance_used": self.tolerance_used,
            "ambiguous": self.ambiguous,
            "exceptional_point": self.has_exceptional_point,
        }
