"""CSV and JSON forms of transform grids, Fourier profiles and pole reports."""

import csv
from typing import Any
from typing import TextIO

from dualep import SCHEMA_VERSION
from dualep.spectral.models import FitResult
from dualep.spectral.models import FourierProfile
from dualep.spectral.models import PoleReport
from dualep.spectral.models import ZGrid
from dualep.spectral.ztransform import capped_log10

ZGRID_HEADER = ["block", "re(z)", "im(z)", "re(val)", "im(val)", "tail_bound", "log10_abs"]
PROFILE_HEADER = ["block", "omega", "re(val)", "im(val)", "amplitude", "log10_abs"]


def _floats(*values: Any) -> list[str]:
    # numpy scalars repr as np.float64(...); plain floats round-trip.
    return [repr(float(v)) for v in values]


def write_zgrid_csv(grids: dict[str, ZGrid], fh: TextIO, *, header: bool = True) -> None:
    """Write labelled grids as consecutive blocks; the label fills the ``block`` column."""
    writer = csv.writer(fh, lineterminator="\n")
    if header:
        writer.writerow(ZGRID_HEADER)
    for label, grid in grids.items():
        logs = capped_log10(grid.values)
        for z, value, bound, log in zip(grid.points, grid.values, grid.tail_bounds, logs, strict=True):
            writer.writerow([label, *_floats(z.real, z.imag, value.real, value.imag, bound, log)])


def write_profile_csv(profiles: dict[str, FourierProfile], fh: TextIO, *, header: bool = True) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    if header:
        writer.writerow(PROFILE_HEADER)
    for label, profile in profiles.items():
        logs = capped_log10(profile.values)
        for omega, value, amp, log in zip(profile.omegas, profile.values, profile.amplitude, logs, strict=True):
            writer.writerow([label, *_floats(omega, value.real, value.imag, amp, log)])


def zgrid_to_json(grid: ZGrid) -> dict[str, Any]:
    return {
        "truncation": grid.truncation,
        "points": [[z.real, z.imag] for z in grid.points],
        "values": [[v.real, v.imag] for v in grid.values],
        # JSON has no infinity; divergent points carry null.
        "tail_bounds": [float(b) if b != float("inf") else None for b in grid.tail_bounds],
    }


def profile_to_json(profile: FourierProfile) -> dict[str, Any]:
    return {
        "omegas": [float(w) for w in profile.omegas],
        "values": [[v.real, v.imag] for v in profile.values],
    }


def pole_reports_to_json(reports: dict[str, PoleReport]) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "blocks": {label: report.to_json() for label, report in reports.items()},
    }


def fits_to_json(fits: list[FitResult]) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "best": fits[0].to_json() if fits else None,
        "fits": [{**fit.to_json(), "decay_factor": fit.decay_factor} for fit in fits],
    }
