import math
import re

import numpy as np
import pytest

from dualep.families.ep2 import closed_form_matrix
from dualep.families.ep2 import ep2_gate
from dualep.families.ep2 import peak_time
from dualep.families.ep2 import solve_ep2
from dualep.families.models import Ep2Config
from dualep.families.models import InadmissibleParameterError
from dualep.families.models import SplitKind
from dualep.gates.services import is_dual_unitary
from dualep.gates.tests.factories import Ep2ConfigFactory
from dualep.tests.fixtures import reference_values as ref
from dualep.transfer.jordan import jordan_structure
from dualep.transfer.services import transfer_plus


class TestSolveEp2:
    """Tests for the second-order family at the exceptional point."""

    def test_reference_point(self, ep2):
        """Φ = 5π/48 reproduces the published coupling and entries."""
        assert ep2.j == pytest.approx(ref.EP2_J, abs=ref.PRINTED_TOL)
        assert ep2.r1 == pytest.approx(ref.EP2_R1, abs=1e-12)
        assert ep2.r2 == pytest.approx(ref.EP2_R2, abs=1e-12)
        assert ep2.l == pytest.approx(ref.EP2_L, abs=1e-12)

    def test_phi_small_relation(self, ep2):
        """φ = Φ - π/4, with magnitude 7π/48 at the reference point."""
        assert ep2.phi_small == pytest.approx(ref.EP2_PHI_BIG - math.pi / 4, abs=1e-15)
        assert abs(ep2.phi_small) == pytest.approx(7 * math.pi / 48, abs=1e-15)

    def test_undetuned_has_no_spectrum(self, ep2):
        """The split spectrum is only computed away from the EP."""
        assert ep2.spectrum is None
        assert ep2.split_kind is SplitKind.EXCEPTIONAL

    def test_gate_is_dual_unitary(self, ep2_gate):
        """The family gate is dual-unitary."""
        assert is_dual_unitary(ep2_gate).ok

    def test_transfer_matches_closed_form(self, ep2, ep2_transfer):
        """M₊ of the built gate is the Jordan-form matrix."""
        assert np.allclose(ep2_transfer.entries, closed_form_matrix(ep2), atol=1e-10)

    def test_xz_block_is_jordan(self, ep2):
        """The (x, z) block is [[r1, l], [0, r1]]."""
        m = closed_form_matrix(ep2)
        assert m[[1, 1, 3, 3], [1, 3, 1, 3]] == pytest.approx([ep2.r1, ep2.l, 0.0, ep2.r1], abs=1e-12)
        assert m[2, 2] == pytest.approx(ep2.r2, abs=1e-12)

    @pytest.mark.parametrize("phi_big", [0.05, 0.2, ref.EP2_PHI_BIG, math.pi / 8, 1.25, 1.45, -0.2])
    def test_self_check_grid(self, phi_big):
        """Every admissible Φ passes the transfer-matrix self-check."""
        d = solve_ep2(Ep2Config(phi_big=phi_big))
        assert np.max(np.abs(transfer_plus(ep2_gate(d)).entries - closed_form_matrix(d))) < 1e-10

    def test_factory_configs_solve(self):
        """Random configs from the window solve with a 2x2 block at r1."""
        for cfg in Ep2ConfigFactory.build_batch(5):
            d = solve_ep2(cfg)
            if abs(d.l) > 1e-3:
                report = jordan_structure(transfer_plus(ep2_gate(d)))
                assert report.cluster_at(d.r1, tol=1e-5).block_sizes == (2,)

    def test_boundary_equality_allowed(self):
        """At Φ = π/8 the constraint |cos 2φ| ≤ |cos 2Φ| holds with equality."""
        d = solve_ep2(Ep2Config(phi_big=math.pi / 8))
        assert d.j == pytest.approx(math.pi / 4)
        assert d.l == pytest.approx(0.0, abs=1e-12)

    def test_to_json(self, ep2):
        """The bundle serializes the solved angles."""
        data = ep2.to_json()
        assert data["family"] == "ep2"
        assert data["phi"] == ep2.phi_small
        assert data["spectrum"] is None


class TestDetunedEp2:
    """Tests for the second-order family away from the EP."""

    def test_real_split_below(self):
        """δ < 0 gives two real eigenvalues at the reference Φ."""
        d = solve_ep2(Ep2Config(phi_big=ref.EP2_PHI_BIG, delta=-0.05))
        assert d.split_kind is SplitKind.REAL
        assert d.spectrum.e1.imag == 0
        assert d.spectrum.e1.real > d.spectrum.e2.real

    def test_complex_split_above(self):
        """δ > 0 gives a complex-conjugate pair."""
        d = solve_ep2(Ep2Config(phi_big=ref.EP2_PHI_BIG, delta=0.05))
        assert d.split_kind is SplitKind.COMPLEX
        assert d.spectrum.e1 == pytest.approx(d.spectrum.e2.conjugate())

    @pytest.mark.parametrize("delta", [-0.05, -0.01, 0.01, 0.05])
    def test_eigenvalue_product(self, delta):
        """The split pair keeps the determinant r1² of the undetuned block."""
        d = solve_ep2(Ep2Config(phi_big=ref.EP2_PHI_BIG, delta=delta))
        assert d.spectrum.e1 * d.spectrum.e2 == pytest.approx(d.r1**2, abs=1e-12)

    @pytest.mark.parametrize("delta", [-0.05, 0.05])
    def test_spectrum_matches_gate(self, delta):
        """E1 and E2 are eigenvalues of the built gate's transfer matrix."""
        d = solve_ep2(Ep2Config(phi_big=ref.EP2_PHI_BIG, delta=delta))
        evals = np.linalg.eigvals(transfer_plus(ep2_gate(d)).entries)
        for e in (d.spectrum.e1, d.spectrum.e2, d.spectrum.e3):
            assert np.min(np.abs(evals - e)) < 1e-8

    def test_continuity_at_ep(self, ep2):
        """The detuned matrix tends to the Jordan form as δ → 0."""
        d = solve_ep2(Ep2Config(phi_big=ref.EP2_PHI_BIG, delta=1e-9))
        assert np.allclose(closed_form_matrix(d), closed_form_matrix(ep2), atol=1e-8)


class TestEp2Errors:
    """Tests for inadmissible second-order parameters."""

    @pytest.mark.parametrize(("phi_big", "message"), ref.EP2_REJECTED)
    def test_rejected_angles(self, phi_big, message):
        """Excluded Φ raise with the violated inequality in the message."""
        with pytest.raises(InadmissibleParameterError, match=re.escape(message)):
            Ep2Config(phi_big=phi_big)

    def test_detuning_outside_window(self):
        """Detuning past the boundary breaks |cos 2Φ| ≥ |cos 2φ|."""
        with pytest.raises(InadmissibleParameterError, match=re.escape("|cos 2Φ| ≥ |cos 2φ|")):
            solve_ep2(Ep2Config(phi_big=math.pi / 8, delta=-0.01))

    def test_non_finite(self):
        """NaN angles are refused."""
        with pytest.raises(InadmissibleParameterError, match="finite"):
            Ep2Config(phi_big=math.nan)


class TestPeakTime:
    """Tests for the peak time of the xz correlator."""

    def test_reference(self, ep2):
        """ξ = -1/(2 log|r1|)."""
        assert peak_time(ep2) == pytest.approx(ref.EP2_PEAK_TIME)

    def test_peak_is_near_xi(self, ep2):
        """The largest |t·r1^{2t}| over integer t lies next to ξ."""
        values = [t * ep2.r1 ** (2 * t) for t in range(30)]
        assert abs(int(np.argmax(values)) - peak_time(ep2)) < 1

    def test_unit_rate_never_decays(self):
        """|r1| = 1 gives an infinite peak time."""
        d = solve_ep2(Ep2Config(phi_big=math.pi / 8))
        assert peak_time(d) == math.inf or peak_time(d) > 1e12
