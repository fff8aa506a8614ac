import math

import numpy as np
import pytest

from dualep.exceptions import ParameterError
from dualep.families.correlators import analytic_series
from dualep.spectral.fitting import compare_fits
from dualep.spectral.fitting import evaluate
from dualep.spectral.fitting import fit_decay
from dualep.spectral.models import ModelKind


class TestFitDecay:
    """Tests for single-model decay fits."""

    def test_pure_exponential(self):
        """0.8^{2t} is recovered exactly with b^{-c} = 0.64."""
        result = fit_decay([0.8 ** (2 * t) for t in range(20)], ModelKind.PURE_EXP)
        assert result.decay_factor == pytest.approx(0.64, abs=1e-12)
        assert result.residual_rms < 1e-10
        assert result.params["b"] == math.e

    def test_linear_beats_pure_on_ep2(self, ep2):
        """2t·l·r1^{2t-1} is a linear-exponential; pure_exp misses by 10³ or more."""
        series = analytic_series(ep2, "x", "z", 20)
        linear = fit_decay(series, "linear_exp")
        pure = fit_decay(series, "pure_exp")
        assert linear.residual_rms < 1e-10
        assert pure.residual_rms > 1e3 * max(linear.residual_rms, 1e-16)
        assert linear.decay_factor == pytest.approx(ep2.r1**2, rel=1e-8)

    def test_quadratic_beats_linear_on_ep3(self, ep3):
        """The ep3 xz correlator carries a t² term."""
        series = analytic_series(ep3, "x", "z", 20)
        quad = fit_decay(series, "quad_exp")
        linear = fit_decay(series, "linear_exp")
        assert quad.residual_rms < linear.residual_rms
        assert quad.decay_factor == pytest.approx(ep3.r**2, rel=1e-6)

    def test_scale_equivariant(self):
        """Scaling the data scales the amplitude and keeps the rate."""
        base = [0.7**t for t in range(15)]
        plain = fit_decay(base, "pure_exp")
        scaled = fit_decay([-0.3 * v for v in base], "pure_exp")
        assert scaled.params["a"] == pytest.approx(-0.3 * plain.params["a"], abs=1e-9)
        assert scaled.params["c"] == pytest.approx(plain.params["c"], abs=1e-9)

    def test_two_mode(self):
        """A sum of two geometric modes is resolved by the two-mode model."""
        t = np.arange(25)
        values = 0.6 * 0.9**t + 0.4 * 0.5**t
        result = fit_decay(values.tolist(), "two_mode")
        assert result.residual_rms < 1e-8
        assert result.decay_factor == pytest.approx(0.9, abs=1e-6)

    def test_mixed_signs_use_raw_fit(self):
        """Data that change sign skip the log path."""
        t = np.arange(20)
        values = (0.5 * t - 0.2 * t**2) * np.exp(-0.6 * t)
        result = fit_decay(values.tolist(), "quad_exp")
        assert result.method == "lm"
        assert result.residual_rms < 1e-8

    def test_too_few_points(self):
        """More points than parameters are required."""
        with pytest.raises(ParameterError, match="needs more than 3 points"):
            fit_decay([0.5, 0.25, 0.125], "quad_exp")

    def test_all_zero(self):
        """A vanishing series has no decay to fit."""
        with pytest.raises(ParameterError, match="identically zero"):
            fit_decay([0.0] * 10, "pure_exp")

    def test_r_squared(self):
        """An exact fit has R² = 1."""
        assert fit_decay([0.9**t for t in range(10)], "pure_exp").r_squared == pytest.approx(1.0)

    def test_evaluate(self):
        """Models evaluate with the natural base."""
        t = np.array([0.0, 1.0, 2.0])
        assert evaluate("linear_exp", [2.0, 1.0], t) == pytest.approx(2 * t * np.exp(-t))


class TestCompareFits:
    """Tests for ranking several models."""

    def test_sorted_by_residual(self, ep2):
        """The best model comes first."""
        results = compare_fits(analytic_series(ep2, "x", "z", 20))
        residuals = [r.residual_rms for r in results]
        assert residuals == sorted(residuals)
        assert results[0].model in {ModelKind.LINEAR_EXP, ModelKind.QUAD_EXP, ModelKind.TWO_MODE}

    def test_skips_unfittable(self, caplog):
        """Models needing more points than given are logged and skipped."""
        results = compare_fits([0.5, 0.25, 0.125], ["pure_exp", "two_mode"])
        assert [r.model for r in results] == [ModelKind.PURE_EXP]
        assert "Skipping decay model" in caplog.text
