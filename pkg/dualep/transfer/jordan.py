"""Numerical Jordan structure of small transfer matrices.

Eigenvalues of a defective matrix split under rounding by roughly
``eps**(1/k)`` for a block of size ``k``, so clustering by distance alone
cannot tell an exceptional point from a close pair. Instead every grouping of
the eigenvalues is tested: a group of ``m`` eigenvalues with mean ``μ`` is
accepted when ``(M - μ)^m`` has an ``m``-dimensional numerical kernel. Block
sizes then follow from the kernel dimensions of the lower powers.
"""

import logging
from collections.abc import Iterator

import numpy as np
import numpy.typing as npt
import scipy.linalg

from dualep.conf import settings
from dualep.linalg.kernel import DimensionError
from dualep.transfer.models import JordanCluster
from dualep.transfer.models import JordanReport
from dualep.transfer.models import TransferMatrix

logger = logging.getLogger(__name__)


def _set_partitions(items: list[int]) -> Iterator[list[list[int]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partition in _set_partitions(rest):
        for i in range(len(partition)):
            yield [*partition[:i], [first, *partition[i]], *partition[i + 1 :]]
        yield [[first], *partition]


# Singular values of (M - μ)^k scale like ‖M‖₂^k, so k = 1 is the plain tol·‖M‖₂
# cut. Transfer matrices of unitary gates have ‖M‖₂ = 1 and the cut is tol at
# every power.
def _threshold(tol: float, scale: float, power: int) -> float:
    return tol * max(1.0, scale) ** power


def _nullity(m: npt.NDArray, mu: complex, power: int, tol: float, scale: float) -> int:
    shifted = np.linalg.matrix_power(m - mu * np.eye(m.shape[0]), power)
    singular = scipy.linalg.svdvals(shifted)
    return int(np.count_nonzero(singular <= _threshold(tol, scale, power)))


def _group_is_valid(m: npt.NDArray, mu: complex, size: int, tol: float, scale: float) -> bool:
    shifted = np.linalg.matrix_power(m - mu * np.eye(m.shape[0]), size)
    singular = np.sort(scipy.linalg.svdvals(shifted))
    return bool(singular[size - 1] <= _threshold(tol, scale, size))


def _block_sizes(m: npt.NDArray, mu: complex, size: int, tol: float, scale: float) -> tuple[int, ...]:
    nullities = [0] + [min(_nullity(m, mu, k, tol, scale), size) for k in range(1, size + 1)]
    nullities[1] = max(nullities[1], 1)
    nullities[-1] = size
    for k in range(1, size + 1):
        nullities[k] = max(nullities[k], nullities[k - 1])
    growth = [nullities[k] - nullities[k - 1] for k in range(1, size + 1)] + [0]
    blocks: list[int] = []
    for k in range(size, 0, -1):
        blocks.extend([k] * max(growth[k - 1] - growth[k], 0))
    if sum(blocks) != size:
        # Inconsistent rank sequence; fall back to a single block.
        logger.warning("Inconsistent kernel dimensions", extra={"nullities": nullities})
        return (size,)
    return tuple(blocks)


def _clean(mu: complex, tol: float) -> complex:
    if abs(mu.imag) < tol:
        return complex(mu.real, 0.0)
    return mu


def jordan_structure(m: TransferMatrix | npt.ArrayLike, tol: float | None = None) -> JordanReport:
    """
    Detect eigenvalue clusters and their Jordan block sizes.

    Args:
        m: Transfer matrix or any small square matrix
        tol: Rank tolerance, relative to ``max(1, ‖M‖₂)`` raised to the power tested.
            Defaults to ``settings.JORDAN_TOL``.

    Returns:
        The report. Among all accepted groupings the one with the fewest
        clusters wins, ties going to the tightest grouping. The report is
        flagged ``ambiguous`` when two groupings tie or two cluster centres lie
        within ``2·tol``.

    Raises:
        DimensionError: If the matrix is not square
    """
    tol = getattr(settings, "JORDAN_TOL", 1e-8) if tol is None else tol
    entries = m.entries if isinstance(m, TransferMatrix) else np.asarray(m)
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
        msg = f"Jordan structure needs a square matrix, got shape {entries.shape}"
        raise DimensionError(msg)
    entries = entries.astype(np.complex128)
    scale = float(np.linalg.norm(entries, 2))
    evals = scipy.linalg.eigvals(entries)

    candidates: list[tuple[int, float, list[list[int]]]] = []
    for partition in _set_partitions(list(range(len(evals)))):
        spread = 0.0
        for group in partition:
            mu = complex(np.mean(evals[group]))
            if not _group_is_valid(entries, mu, len(group), tol, scale):
                break
            spread += float(np.max(np.abs(evals[group] - mu)))
        else:
            candidates.append((len(partition), spread, partition))

    candidates.sort(key=lambda c: (c[0], c[1]))
    count, spread, best = candidates[0]
    ambiguous = any(c[0] == count for c in candidates[1:])

    clusters = []
    for group in best:
        mu = complex(np.mean(evals[group]))
        blocks = _block_sizes(entries, mu, len(group), tol, scale)
        clusters.append(
            JordanCluster(
                eigenvalue=_clean(mu, tol),
                algebraic_mult=len(group),
                geometric_mult=len(blocks),
                block_sizes=blocks,
            ),
        )
    clusters.sort(key=lambda c: (-abs(c.eigenvalue), -c.eigenvalue.real, -c.eigenvalue.imag))

    centres = [c.eigenvalue for c in clusters]
    for i, a in enumerate(centres):
        if any(abs(a - b) < 2 * tol for b in centres[i + 1 :]):
            ambiguous = True
    if ambiguous:
        logger.warning(
            "Ambiguous eigenvalue clustering",
            extra={"eigenvalues": [f"{e:.6g}" for e in evals], "tolerance": tol},
        )
    logger.debug(
        "Jordan structure",
        extra={"blocks": [list(c.block_sizes) for c in clusters], "spread": spread},
    )
    return JordanReport(clusters=tuple(clusters), tolerance_used=tol, ambiguous=ambiguous)
