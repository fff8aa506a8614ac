import itertools

import attrs
import pytest

from dualep.circuits.models import Source
from dualep.exceptions import ParameterError
from dualep.families.correlators import analytic_corr
from dualep.families.correlators import analytic_series
from dualep.families.correlators import detuned_corr
from dualep.families.correlators import detuning_scan
from dualep.families.correlators import transfer_series
from dualep.families.models import DegenerateSpectrumError
from dualep.families.models import InadmissibleParameterError
from dualep.families.models import SplitKind
from dualep.families.models import UnsupportedChannelError
from dualep.families.services import family_gate
from dualep.families.services import solve_family
from dualep.tests.fixtures import reference_values as ref
from dualep.transfer.services import lightcone_values
from dualep.transfer.services import transfer_plus

PAIRS = list(itertools.product("xyz", repeat=2))
EP3_SUPPORTED = [("x", "x"), ("y", "y"), ("z", "z"), ("x", "z"), ("x", "y"), ("y", "z")]


class TestAnalyticEp2:
    """Tests for the closed-form correlators of the second-order family."""

    @pytest.mark.parametrize(("alpha", "beta"), PAIRS)
    def test_matches_transfer_powers(self, ep2, ep2_transfer, alpha, beta):
        """Every channel equals (M^{2t})[α][β] of the built gate."""
        expected = lightcone_values(ep2_transfer, "ixyz".index(alpha), "ixyz".index(beta), 8)
        got = [analytic_corr("ep2", ep2, alpha, beta, t) for t in range(9)]
        assert got == pytest.approx(expected, abs=1e-10)

    def test_xz_formula(self, ep2):
        """C^{xz}(t) = 2t·l·r1^{2t-1}."""
        for t in range(1, 6):
            value = 2 * t * ep2.l * ep2.r1 ** (2 * t - 1)
            assert analytic_corr("ep2", ep2, "x", "z", t) == pytest.approx(value, rel=1e-14)

    def test_xy_vanishes(self, ep2):
        """The y channel decouples from x and z."""
        assert all(analytic_corr("ep2", ep2, "x", "y", t) == 0.0 for t in range(6))

    def test_time_zero(self, ep2):
        """C(0) is the identity on the diagonal and zero elsewhere."""
        assert analytic_corr("ep2", ep2, "z", "z", 0) == 1.0
        assert analytic_corr("ep2", ep2, "x", "z", 0) == 0.0

    def test_identity_channel(self, ep2):
        """Channels with the identity are trivial."""
        assert analytic_corr("ep2", ep2, "i", "i", 4) == 1.0
        assert analytic_corr("ep2", ep2, "i", "z", 4) == 0.0

    def test_wrong_family(self, ep2):
        """Asking for ep3 correlators of an ep2 bundle is a parameter error."""
        with pytest.raises(ParameterError, match="belong to ep2"):
            analytic_corr("ep3", ep2, "x", "z", 1)

    def test_negative_time(self, ep2):
        """Negative times are rejected."""
        with pytest.raises(ParameterError, match="non-negative"):
            analytic_corr("ep2", ep2, "x", "z", -1)

    def test_refuses_detuned(self):
        """The exceptional-point formulas need δ = 0."""
        d = solve_family("ep2", ref.EP2_PHI_BIG, -0.05)
        with pytest.raises(InadmissibleParameterError, match="detuned_corr"):
            analytic_corr("ep2", d, "x", "z", 1)


class TestAnalyticEp3:
    """Tests for the closed-form correlators of the third-order family."""

    @pytest.mark.parametrize(("alpha", "beta"), EP3_SUPPORTED)
    def test_matches_transfer_powers(self, ep3, ep3_transfer, alpha, beta):
        """Supported channels equal (M^{2t})[α][β] of the built gate."""
        expected = lightcone_values(ep3_transfer, "ixyz".index(alpha), "ixyz".index(beta), 8)
        got = [analytic_corr("ep3", ep3, alpha, beta, t) for t in range(9)]
        assert got == pytest.approx(expected, abs=1e-10)

    def test_xz_has_quadratic_term(self, ep3):
        """C^{xz} carries t(2t-1)·l1²·r^{2t-2} on top of the linear term."""
        t = 3
        value = 2 * t * ep3.l2 * ep3.r ** (2 * t - 1) + t * (2 * t - 1) * ep3.l1**2 * ep3.r ** (2 * t - 2)
        assert analytic_corr("ep3", ep3, "x", "z", t) == pytest.approx(value, rel=1e-14)

    @pytest.mark.parametrize(("alpha", "beta"), [("z", "x"), ("y", "x"), ("z", "y")])
    def test_unsupported_channels(self, ep3, alpha, beta):
        """Lower-triangular channels have no closed form and raise."""
        with pytest.raises(UnsupportedChannelError, match="lightcone_corr"):
            analytic_corr("ep3", ep3, alpha, beta, 2)


class TestDetunedCorr:
    """Tests for the closed-form xz correlator away from the EP."""

    @pytest.mark.parametrize("delta", [-0.05, -0.01, 0.01, 0.05])
    @pytest.mark.parametrize(("family", "phi_big"), [("ep2", ref.EP2_PHI_BIG), ("ep3", ref.EP3_PHI_BIG)])
    def test_matches_transfer_powers(self, family, phi_big, delta):
        """The mode sum equals (M^{2t})[x][z] of the detuned gate for t = 1..10."""
        d = solve_family(family, phi_big, delta)
        expected = lightcone_values(transfer_plus(family_gate(d)), 1, 3, 10)
        got = [detuned_corr(family, d, t) for t in range(11)]
        assert got[1:] == pytest.approx(expected[1:], abs=1e-10)

    @pytest.mark.parametrize("delta", [-1e-6, 1e-6])
    @pytest.mark.parametrize(("family", "phi_big"), [("ep2", ref.EP2_PHI_BIG), ("ep3", ref.EP3_PHI_BIG)])
    def test_tends_to_ep(self, family, phi_big, delta):
        """On both sides of δ = 0 the mode sum approaches the closed form at the EP."""
        at_ep = solve_family(family, phi_big)
        d = solve_family(family, phi_big, delta)
        for t in range(1, 11):
            assert detuned_corr(family, d, t) == pytest.approx(analytic_corr(family, at_ep, "x", "z", t), abs=1e-4)

    def test_refuses_undetuned(self, ep2):
        """At δ = 0 the mode sum is singular; the EP formula must be used."""
        with pytest.raises(InadmissibleParameterError, match="analytic_corr"):
            detuned_corr("ep2", ep2, 1)

    def test_degenerate_split(self):
        """A spectrum whose split vanished cannot be divided by Δ."""
        d = solve_family("ep2", ref.EP2_PHI_BIG, -0.05)
        merged = attrs.evolve(d.spectrum, delta_cap=0j, split_kind=SplitKind.EXCEPTIONAL)
        with pytest.raises(DegenerateSpectrumError, match="singular"):
            detuned_corr("ep2", attrs.evolve(d, spectrum=merged), 1)


class TestSeries:
    """Tests for series builders."""

    def test_analytic_series(self, ep2):
        """The series carries its source and parameters."""
        series = analytic_series(ep2, "x", "z", 5)
        assert series.source is Source.ANALYTIC
        assert series.times == tuple(range(6))
        assert series.metadata["family"] == "ep2"
        assert series.channel == "xz"

    def test_detuned_off_channel_uses_matrix(self):
        """Detuned channels other than xz come from closed-form matrix powers."""
        d = solve_family("ep2", ref.EP2_PHI_BIG, -0.05)
        series = analytic_series(d, "z", "z", 6)
        expected = lightcone_values(transfer_plus(family_gate(d)), 3, 3, 6)
        assert list(series.values) == pytest.approx(expected, abs=1e-10)

    def test_transfer_series(self, ep2_transfer):
        """Transfer series are labelled with their direction."""
        series = transfer_series(ep2_transfer, "z", "z", 3, {"note": "check"})
        assert series.source is Source.TRANSFER
        assert series.metadata == {"direction": "plus", "note": "check"}


class TestDetuningScan:
    """Tests for eigenvalue trajectories through the EP."""

    def test_ep2_sides(self):
        """Real pair below, EP at zero, complex pair above."""
        points = detuning_scan("ep2", ref.EP2_PHI_BIG, [-0.05, 0.0, 0.05])
        assert [p.split_kind for p in points] == [SplitKind.REAL, SplitKind.EXCEPTIONAL, SplitKind.COMPLEX]
        assert points[1].e1 == pytest.approx(ref.EP2_R1)
        assert points[1].e3 == pytest.approx(ref.EP2_R2)

    def test_ep3_sides(self):
        """The third-order branch splits along the real axis for δ > 0."""
        points = detuning_scan("ep3", ref.EP3_PHI_BIG, [-0.02, 0.0, 0.02])
        assert [p.split_kind for p in points] == [SplitKind.COMPLEX, SplitKind.EXCEPTIONAL, SplitKind.REAL]

    def test_pair_merges(self):
        """Close to the EP the split pair is within 1e-3."""
        (point,) = detuning_scan("ep2", ref.EP2_PHI_BIG, [-1e-8])
        assert abs(point.e1 - point.e2) < 1e-3

    def test_rows(self):
        """Rows are flat for CSV output."""
        (point,) = detuning_scan("ep2", ref.EP2_PHI_BIG, [0.05])
        row = point.to_row()
        assert row[0] == 0.05
        assert row[-1] == "complex"
        assert len(row) == 8
