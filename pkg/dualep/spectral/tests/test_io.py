import csv
import io
import json

import numpy as np
import pytest

from dualep import SCHEMA_VERSION
from dualep.spectral.fitting import compare_fits
from dualep.spectral.io import PROFILE_HEADER
from dualep.spectral.io import ZGRID_HEADER
from dualep.spectral.io import fits_to_json
from dualep.spectral.io import pole_reports_to_json
from dualep.spectral.io import profile_to_json
from dualep.spectral.io import write_profile_csv
from dualep.spectral.io import write_zgrid_csv
from dualep.spectral.io import zgrid_to_json
from dualep.spectral.ztransform import dft_profile
from dualep.spectral.ztransform import pole_report
from dualep.spectral.ztransform import z_numeric


@pytest.fixture
def grid():
    return z_numeric([0.9**t for t in range(30)], [2.0, 0.5j])


class TestZGridOutput:
    """Tests for transform grids on disk."""

    def test_csv_blocks(self, grid):
        """Each labelled grid becomes a block of rows under one header."""
        fh = io.StringIO()
        write_zgrid_csv({"below": grid, "at": grid}, fh)
        rows = list(csv.reader(io.StringIO(fh.getvalue())))
        assert rows[0] == ZGRID_HEADER
        assert [r[0] for r in rows[1:]] == ["below", "below", "at", "at"]
        assert float(rows[1][3]) == pytest.approx(grid.values[0].real)

    def test_csv_without_header(self, grid):
        """Appending blocks skips the header."""
        fh = io.StringIO()
        write_zgrid_csv({"above": grid}, fh, header=False)
        assert fh.getvalue().splitlines()[0].startswith("above,")

    def test_json_divergent_bound(self, grid):
        """Infinite tail bounds become null so the payload stays valid JSON."""
        data = zgrid_to_json(grid)
        assert data["tail_bounds"][1] is None
        assert data["truncation"] == 29
        json.dumps(data, allow_nan=False)


class TestProfileOutput:
    """Tests for Fourier profiles on disk."""

    def test_csv(self, ep2):
        """Rows carry ω, the value and its amplitude."""
        profile = dft_profile("ep2", ep2, [0.0, 0.5])
        fh = io.StringIO()
        write_profile_csv({"at": profile}, fh)
        rows = list(csv.reader(io.StringIO(fh.getvalue())))
        assert rows[0] == PROFILE_HEADER
        assert float(rows[2][1]) == 0.5
        assert float(rows[2][4]) == pytest.approx(np.abs(profile.values[1]))

    def test_json(self, ep2):
        """Complex values are written as pairs."""
        data = profile_to_json(dft_profile("ep2", ep2, [0.25]))
        assert len(data["values"][0]) == 2


class TestReportOutput:
    """Tests for pole and fit payloads."""

    def test_pole_reports(self, ep2, ep3):
        """Reports are keyed by block and versioned."""
        data = pole_reports_to_json({"ep2": pole_report(ep2), "ep3": pole_report(ep3)})
        assert data["schema_version"] == SCHEMA_VERSION
        assert data["blocks"]["ep3"]["max_order"] == 3

    def test_fits(self):
        """The best fit leads and every fit carries its decay factor."""
        data = fits_to_json(compare_fits([0.5**t for t in range(12)], ["pure_exp", "linear_exp"]))
        assert data["best"]["model"] == "pure_exp"
        assert data["fits"][0]["decay_factor"] == pytest.approx(0.5)

    def test_no_fits(self):
        """An empty comparison has no best model."""
        assert fits_to_json([])["best"] is None
