"""CSV and JSON forms of correlation series."""

import csv
from collections.abc import Sequence
from typing import Any
from typing import TextIO

from dualep import SCHEMA_VERSION
from dualep.circuits.models import CorrelationSeries
from dualep.circuits.models import SeriesError


def series_to_json(series: CorrelationSeries) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "channel": series.channel,
        "alpha": int(series.alpha),
        "beta": int(series.beta),
        "source": str(series.source),
        "metadata": series.metadata,
        "times": list(series.times),
        "values": list(series.values),
    }


def write_series_csv(series: CorrelationSeries, fh: TextIO) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["t", "value"])
    for t, value in zip(series.times, series.values, strict=True):
        writer.writerow([t, repr(value)])


def write_comparison_csv(
    reference: Sequence[CorrelationSeries],
    simulated: Sequence[CorrelationSeries],
    fh: TextIO,
) -> float:
    """
    Write analytic and circuit series side by side, one row per channel and time.

    Returns:
        The largest absolute difference over all rows.

    Raises:
        SeriesError: If the two lists do not pair up channel by channel
    """
    if len(reference) != len(simulated):
        msg = f"Cannot pair {len(reference)} reference series with {len(simulated)} simulated ones"
        raise SeriesError(msg)
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["channel", "t", "analytic", "circuit", "abs_diff"])
    worst = 0.0
    for ref, sim in zip(reference, simulated, strict=True):
        if ref.channel != sim.channel or ref.times != sim.times:
            msg = f"Series {ref.channel} and {sim.channel} do not share channel and times"
            raise SeriesError(msg)
        for t, a, b in zip(ref.times, ref.values, sim.values, strict=True):
            diff = abs(a - b)
            worst = max(worst, diff)
            writer.writerow([ref.channel, t, repr(a), repr(b), repr(diff)])
    return worst
