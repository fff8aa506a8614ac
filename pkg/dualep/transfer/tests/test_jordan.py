import numpy as np
import pytest
import scipy.linalg

from dualep.linalg.kernel import DimensionError
from dualep.tests.fixtures import reference_values as ref
from dualep.transfer.jordan import jordan_structure
from dualep.transfer.models import TransferMatrix


class TestJordanStructure:
    """Tests for numerical Jordan block detection."""

    def test_diagonalizable_pair(self):
        """A repeated eigenvalue with two eigenvectors gives two 1x1 blocks."""
        report = jordan_structure(np.diag([0.5, 0.5]))
        (cluster,) = report.clusters
        assert cluster.algebraic_mult == 2
        assert cluster.block_sizes == (1, 1)
        assert not report.has_exceptional_point

    def test_two_block(self):
        """An upper-triangular pair with a coupling is one 2x2 block."""
        report = jordan_structure([[0.5, 1.0], [0.0, 0.5]])
        (cluster,) = report.clusters
        assert cluster.block_sizes == (2,)
        assert cluster.geometric_mult == 1
        assert report.max_block_size == 2

    def test_three_block(self):
        """The nilpotent chain of length three is one 3x3 block."""
        m = np.array([[0.7, 0.3, 0.2], [0.0, 0.7, 0.3], [0.0, 0.0, 0.7]])
        report = jordan_structure(m)
        assert report.cluster_at(0.7).block_sizes == (3,)

    def test_mixed_blocks(self):
        """A 2-block and a 1-block at the same eigenvalue."""
        m = np.array([[0.4, 1.0, 0.0], [0.0, 0.4, 0.0], [0.0, 0.0, 0.4]])
        assert jordan_structure(m).cluster_at(0.4).block_sizes == (2, 1)

    def test_distinct_eigenvalues_sorted(self):
        """Clusters are ordered by decreasing magnitude."""
        report = jordan_structure(np.diag([0.2, 1.0, 0.6]))
        assert [c.eigenvalue.real for c in report.clusters] == pytest.approx([1.0, 0.6, 0.2])
        assert not report.ambiguous

    def test_ep2_transfer(self, ep2_transfer):
        """The second-order family has a 2x2 block at r1 and a simple r2."""
        report = jordan_structure(ep2_transfer)
        assert report.cluster_at(ref.EP2_R1).block_sizes == (2,)
        assert report.cluster_at(ref.EP2_R2).block_sizes == (1,)
        assert report.cluster_at(1.0).block_sizes == (1,)

    def test_ep3_transfer(self, ep3_transfer, ep3):
        """The third-order family has a 3x3 block at r."""
        report = jordan_structure(ep3_transfer)
        assert report.cluster_at(ep3.r).block_sizes == (3,)
        assert report.max_block_size == 3

    def test_accepts_transfer_matrix(self):
        """TransferMatrix and raw arrays give the same report."""
        m = np.diag([1.0, 0.3, 0.3, 0.9])
        assert jordan_structure(TransferMatrix(m)).to_json() == jordan_structure(m).to_json()

    def test_cluster_at_missing(self):
        """Asking for an absent eigenvalue raises KeyError."""
        with pytest.raises(KeyError):
            jordan_structure(np.diag([0.5, 0.5])).cluster_at(0.9)

    def test_non_square(self):
        """Rectangular input is rejected."""
        with pytest.raises(DimensionError, match="square"):
            jordan_structure(np.zeros((2, 3)))

    def test_report_json(self, ep2_transfer):
        """The JSON form records the tolerance and the exceptional point."""
        data = jordan_structure(ep2_transfer, tol=1e-7).to_json()
        assert data["tolerance_used"] == 1e-7
        assert data["exceptional_point"] is True


def jordan_matrix(structure: list[tuple[float, int]]) -> np.ndarray:
    return scipy.linalg.block_diag(*(value * np.eye(size) + np.eye(size, k=1) for value, size in structure))


def well_conditioned(rng: np.random.Generator, n: int) -> np.ndarray:
    u, _ = np.linalg.qr(rng.normal(size=(n, n)))
    v, _ = np.linalg.qr(rng.normal(size=(n, n)))
    return u @ np.diag(rng.uniform(1.0, 3.0, n)) @ v


class TestConjugatedBlocks:
    """Block sizes survive a similarity transform with cond(Q) < 100."""

    @pytest.mark.parametrize(
        "structure",
        [
            [(0.7, 2), (0.3, 1), (-0.5, 1)],
            [(0.6, 3), (-0.2, 1)],
            [(0.5, 2), (0.5, 1), (0.1, 1)],
            [(0.8, 2), (-0.4, 2)],
            [(0.45, 2), (0.45, 2)],
            [(0.55, 4)],
            [(0.9, 1), (0.4, 1), (0.1, 1), (-0.6, 1)],
        ],
    )
    def test_recovers_block_sizes(self, structure):
        """Q·J·Q⁻¹ has the block sizes of J at tol = 1e-8."""
        expected: dict[float, list[int]] = {}
        for value, size in structure:
            expected.setdefault(value, []).append(size)
        rng = np.random.default_rng(2024)
        j = jordan_matrix(structure)
        for _ in range(25):
            q = well_conditioned(rng, j.shape[0])
            assert np.linalg.cond(q) < 100
            report = jordan_structure(q @ j @ np.linalg.inv(q), tol=1e-8)
            assert len(report.clusters) == len(expected)
            for value, sizes in expected.items():
                assert report.cluster_at(value).block_sizes == tuple(sorted(sizes, reverse=True))
