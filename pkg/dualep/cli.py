"""Command-line front end.

Every sub-command writes plot-ready CSV or JSON and exits with 0 on success,
2 for invalid parameters and 3 when a numerical self-check fails. Global flags
(``--settings``, ``--log-level``, ``--output``, ``--format``) are accepted
before or after the sub-command.

Site labels: ``--site`` takes the half-integer site ``x`` of the light-cone
picture, which is qubit ``2x`` of the chain, so site 0.5 is qubit 1. The
circuit commands run on an open chain of ``2L`` qubits.
"""

import argparse
import contextlib
import json
import logging
import math
import sys
from collections.abc import Callable
from collections.abc import Iterator
from fractions import Fraction
from pathlib import Path
from typing import Any
from typing import TextIO

import numpy as np
from attrs import define
from attrs import field
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from config.logging import run_context
from dualep import SCHEMA_VERSION
from dualep import __version__
from dualep.circuits.brickwork import brickwork_unitary
from dualep.circuits.brickwork import lightcone_series
from dualep.circuits.brickwork import site_to_qubit
from dualep.circuits.floquet import floquet_corr
from dualep.circuits.io import series_to_json
from dualep.circuits.io import write_comparison_csv
from dualep.circuits.io import write_series_csv
from dualep.circuits.models import Boundary
from dualep.circuits.models import FloquetSpec
from dualep.circuits.models import RingSpec
from dualep.conf import settings
from dualep.exceptions import DualEPError
from dualep.exceptions import ParameterError
from dualep.exceptions import SelfCheckError
from dualep.families.correlators import analytic_series
from dualep.families.correlators import detuning_scan
from dualep.families.ep2 import peak_time
from dualep.families.models import Ep2Derived
from dualep.families.models import Family
from dualep.families.services import Derived
from dualep.families.services import closed_form_matrix
from dualep.families.services import family_gate
from dualep.families.services import make_config
from dualep.families.services import solve_family
from dualep.gates.serializers import gate_from_json
from dualep.gates.serializers import gate_to_json
from dualep.linalg.pauli import PauliIndex
from dualep.spectral.fitting import compare_fits
from dualep.spectral.io import fits_to_json
from dualep.spectral.io import pole_reports_to_json
from dualep.spectral.io import profile_to_json
from dualep.spectral.io import write_profile_csv
from dualep.spectral.io import write_zgrid_csv
from dualep.spectral.io import zgrid_to_json
from dualep.spectral.models import FourierProfile
from dualep.spectral.models import PoleReport
from dualep.spectral.models import ZGrid
from dualep.spectral.ztransform import dft_profile
from dualep.spectral.ztransform import pole_report
from dualep.spectral.ztransform import transform_kind
from dualep.spectral.ztransform import z_numeric
from dualep.transfer.jordan import jordan_structure
from dualep.transfer.models import TransferMatrix
from dualep.transfer.services import classify
from dualep.transfer.services import transfer_plus

logger = logging.getLogger(__name__)

console = Console(stderr=True)

EXIT_OK = 0
EXIT_PARAMETER = 2
EXIT_SELF_CHECK = 3

FORMATS = ("csv", "json")

# Detuning magnitude used for the below/above blocks when --delta is not given.
DEFAULT_SPLIT = {Family.EP2: 0.05, Family.EP3: 0.02}
# Φ windows sampled by `solve --samples`; both stay clear of the window edges.
SAMPLE_WINDOWS = {
    Family.EP2: (0.01, math.pi / 8),
    Family.EP3: (0.01, 0.5 * math.acos(1 / math.sqrt(3)) - 1e-3),
}


def pi_fraction(text: str) -> float:
    """Parse ``p/q`` (or ``p``) as ``p·π/q``."""
    try:
        return float(Fraction(text.strip())) * math.pi
    except (ValueError, ZeroDivisionError) as exc:
        msg = f"expected a rational multiple of π such as 5/48, got {text!r}"
        raise argparse.ArgumentTypeError(msg) from exc


def channel_list(text: str) -> list[tuple[PauliIndex, PauliIndex]]:
    """Parse ``xz,zz,xy`` into Pauli pairs."""
    pairs = []
    for token in filter(None, (t.strip() for t in text.split(","))):
        if len(token) != 2:
            msg = f"channels are two Pauli labels such as xz, got {token!r}"
            raise argparse.ArgumentTypeError(msg)
        try:
            pairs.append((PauliIndex.parse(token[0]), PauliIndex.parse(token[1])))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from exc
    if not pairs:
        msg = "at least one channel is required"
        raise argparse.ArgumentTypeError(msg)
    return pairs


def delta_grid(text: str) -> list[float]:
    """Parse ``start:stop:num`` (inclusive linspace) or a comma-separated list."""
    try:
        if ":" in text:
            start, stop, num = text.split(":")
            return np.linspace(float(start), float(stop), int(num)).tolist()
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        msg = f"expected start:stop:num or a comma-separated list, got {text!r}"
        raise argparse.ArgumentTypeError(msg) from exc


@define(frozen=True)
class RunConfig:
    """
    Validated inputs of one CLI run.

    Family parameters are checked against their admissibility window when
    the config is built, before any computation starts.
    """

    command: str
    family: Family = field(converter=Family)
    phi_big: float = field(converter=float)
    delta: float | None = None
    t_max: int | None = None
    ring_l: int = 5
    channels: tuple[tuple[PauliIndex, PauliIndex], ...] = ((PauliIndex.X, PauliIndex.Z),)
    site: float | None = None
    output: Path | None = None
    fmt: str = "csv"
    seed: int = 0
    samples: int = 0
    radius: float = 1.2
    points: int = 64
    deltas: tuple[float, ...] = ()

    def __attrs_post_init__(self) -> None:
        make_config(self.family, self.phi_big, self.delta or 0.0)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        phi_big = args.pi_frac if args.pi_frac is not None else args.phi
        return cls(
            command=args.command,
            family=args.family,
            phi_big=phi_big,
            delta=getattr(args, "delta", None),
            t_max=getattr(args, "t_max", None),
            ring_l=getattr(args, "ring_l", 5),
            channels=tuple(getattr(args, "channels", None) or ((PauliIndex.X, PauliIndex.Z),)),
            site=getattr(args, "site", None),
            output=_resolve_output(args.output),
            fmt=args.format,
            seed=getattr(args, "seed", 0),
            samples=getattr(args, "samples", 0),
            radius=getattr(args, "radius", 1.2),
            points=getattr(args, "points", 64),
            deltas=tuple(getattr(args, "deltas", None) or ()),
        )

    @property
    def stem(self) -> str:
        return f"{self.command}_{self.family}"

    def sidecar(self, suffix: str) -> Path:
        """Path next to the main artifact; falls back to ``OUTPUT_DIR`` when writing to stdout."""
        base = self.output or Path(getattr(settings, "OUTPUT_DIR", ".")) / self.stem
        return base.with_name(f"{base.stem}{suffix}")


def _resolve_output(value: str | None) -> Path | None:
    if value in {None, "-"}:
        return None
    path = Path(value)
    if path.parent == Path():
        return Path(getattr(settings, "OUTPUT_DIR", ".")) / path
    return path


@contextlib.contextmanager
def _open_output(path: Path | None) -> Iterator[TextIO]:
    if path is None:
        yield sys.stdout
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as fh:
        yield fh
    logger.info("Wrote artifact", extra={"path": str(path)})


def _dump_json(payload: dict[str, Any], fh: TextIO) -> None:
    json.dump(payload, fh, indent=2, ensure_ascii=False, allow_nan=False)
    fh.write("\n")


def _write_json(payload: dict[str, Any], path: Path | None) -> None:
    with _open_output(path) as fh:
        _dump_json(payload, fh)


def _gate_payload(gate: np.ndarray) -> list[list[list[float]]]:
    """JSON form of the gate, read back to make sure the bundle reproduces it bit for bit."""
    payload = gate_to_json(gate)
    if not np.array_equal(gate_from_json(json.dumps(payload)), gate):
        msg = "The serialized gate does not reproduce the solved gate"
        raise SelfCheckError(msg)
    return payload


def _solve_payload(d: Derived) -> dict[str, Any]:
    gate = family_gate(d)
    matrix = TransferMatrix(closed_form_matrix(d))
    report = jordan_structure(matrix)
    ergodicity = classify(transfer_plus(gate))
    payload = {
        "schema_version": SCHEMA_VERSION,
        **d.to_json(),
        "transfer": matrix.to_json(),
        "jordan": report.to_json(),
        "ergodicity": str(ergodicity),
        "gate": _gate_payload(gate),
    }
    if isinstance(d, Ep2Derived):
        xi = peak_time(d)
        payload["peak_time"] = xi if math.isfinite(xi) else None
    return payload


def _summary_table(payload: dict[str, Any]) -> Table:
    table = Table(title=f"{payload['family']} family", show_header=False)
    table.add_column("quantity", style="bold")
    table.add_column("value")
    skip = {"schema_version", "family", "transfer", "jordan", "spectrum", "detuned", "gate"}
    for key, value in payload.items():
        if key in skip or value is None:
            continue
        table.add_row(key, f"{value:.10g}" if isinstance(value, float) else str(value))
    for cluster in payload["jordan"]["clusters"]:
        re, im = cluster["eigenvalue"]
        label = f"{re:.6g}" if im == 0 else f"{re:.6g}{im:+.6g}j"
        table.add_row(f"λ = {label}", f"blocks {cluster['block_sizes']}")
    return table


def _sample_solves(cfg: RunConfig) -> int:
    rng = np.random.default_rng(cfg.seed)
    low, high = SAMPLE_WINDOWS[cfg.family]
    failures = []
    for phi_big in rng.uniform(low, high, cfg.samples):
        try:
            solve_family(cfg.family, float(phi_big))
        except SelfCheckError as exc:
            failures.append((float(phi_big), str(exc)))
    if failures:
        msg = f"{len(failures)} of {cfg.samples} sampled {cfg.family} gates failed their self-check; first: {failures[0][1]}"
        raise SelfCheckError(msg)
    return cfg.samples


def cmd_solve(cfg: RunConfig) -> None:
    """Solve one family, print a summary and write the JSON bundle."""
    d = solve_family(cfg.family, cfg.phi_big, cfg.delta or 0.0)
    payload = _solve_payload(d)
    if cfg.samples:
        payload["sampled_self_checks"] = {"seed": cfg.seed, "passed": _sample_solves(cfg)}
    console.print(_summary_table(payload))
    _write_json(payload, cfg.output)


def cmd_correlate(cfg: RunConfig) -> None:
    """Analytic and circuit light-cone series side by side."""
    ring = RingSpec(cfg.ring_l, boundary=Boundary.OPEN)
    t_max = ring.max_lightcone_time if cfg.t_max is None else cfg.t_max
    if t_max > ring.max_lightcone_time:
        msg = f"2·t_max < 2·L is required for the circuit column, got t_max = {t_max} with L = {ring.half_sites}"
        raise ParameterError(msg)
    d = solve_family(cfg.family, cfg.phi_big, cfg.delta or 0.0)
    step = brickwork_unitary(family_gate(d), ring)
    # Odd qubits travel right through M₊, the matrix the closed forms describe.
    y = site_to_qubit(0.5 if cfg.site is None else cfg.site, ring)
    if y % 2 == 0:
        msg = f"The circuit column starts on an odd qubit so that it follows M₊, got qubit {y} (site {cfg.site})"
        raise ParameterError(msg)
    analytic = [analytic_series(d, a, b, t_max) for a, b in cfg.channels]
    circuit = [lightcone_series(step, ring, a, b, y, t_max) for a, b in cfg.channels]

    if cfg.fmt == "json":
        worst = max(
            float(np.max(np.abs(np.subtract(a.values, c.values)))) for a, c in zip(analytic, circuit, strict=True)
        )
        _write_json(
            {
                "schema_version": SCHEMA_VERSION,
                "max_abs_diff": worst,
                "analytic": [series_to_json(s) for s in analytic],
                "circuit": [series_to_json(s) for s in circuit],
            },
            cfg.output,
        )
    else:
        with _open_output(cfg.output) as fh:
            worst = write_comparison_csv(analytic, circuit, fh)

    tol = getattr(settings, "CIRCUIT_ORACLE_TOL", 1e-9)
    logger.info("Compared analytic and circuit series", extra={"max_abs_diff": worst, "half_sites": ring.half_sites})
    if worst > tol:
        msg = f"Circuit and closed form differ by {worst:.3e} (tolerance {tol:.1e})"
        raise SelfCheckError(msg)


def cmd_spectral(cfg: RunConfig) -> None:
    """Transform grids and Fourier profiles below, at and above the exceptional point."""
    magnitude = abs(cfg.delta) if cfg.delta else DEFAULT_SPLIT[cfg.family]
    t_max = 200 if cfg.t_max is None else cfg.t_max
    circle = cfg.radius * np.exp(2j * np.pi * np.arange(cfg.points) / cfg.points)

    grids: dict[str, ZGrid] = {}
    profiles: dict[str, FourierProfile] = {}
    reports: dict[str, PoleReport] = {}
    for label, delta in (("below", -magnitude), ("at", 0.0), ("above", magnitude)):
        d = solve_family(cfg.family, cfg.phi_big, delta)
        report = pole_report(d)
        reports[label] = report
        series = analytic_series(d, "x", "z", t_max)
        grids[label] = z_numeric(series, circle, poles=[p.location for p in report.poles])
        profiles[label] = dft_profile(transform_kind(d), d, None)
        logger.info(
            "Spectral block done",
            extra={"block": label, "delta": delta, "poles": len(report.poles), "max_order": report.max_order},
        )

    poles = pole_reports_to_json(reports)
    if cfg.fmt == "json":
        _write_json(
            {
                **poles,
                "blocks": {
                    label: {
                        "zgrid": zgrid_to_json(grids[label]),
                        "fourier": profile_to_json(profiles[label]),
                        "poles": poles["blocks"][label],
                    }
                    for label in grids
                },
            },
            cfg.output,
        )
        return
    with _open_output(cfg.output) as fh:
        write_zgrid_csv(grids, fh)
    with _open_output(cfg.sidecar("_fourier.csv")) as fh:
        write_profile_csv(profiles, fh)
    _write_json(poles, cfg.sidecar("_poles.json"))


def cmd_floquet(cfg: RunConfig) -> None:
    """Kicked-chain series and decay-model fits."""
    ring = RingSpec(cfg.ring_l, boundary=Boundary.OPEN)
    d = solve_family(cfg.family, cfg.phi_big, cfg.delta or 0.0)
    spec = FloquetSpec.from_derived(d, ring)
    t_max = ring.max_lightcone_time if cfg.t_max is None else cfg.t_max
    alpha, beta = cfg.channels[0]
    # The even layer acts first, so even qubits travel right.
    y = site_to_qubit(0.0 if cfg.site is None else cfg.site, ring)
    series = floquet_corr(spec, alpha, beta, y, t_max)
    fits = fits_to_json(compare_fits(series))
    if fits["best"] is not None:
        logger.info("Best decay model", extra={"model": fits["best"]["model"], "residual_rms": fits["best"]["residual_rms"]})

    if cfg.fmt == "json":
        _write_json({"schema_version": SCHEMA_VERSION, "series": series_to_json(series), "fits": fits}, cfg.output)
        return
    with _open_output(cfg.output) as fh:
        write_series_csv(series, fh)
    _write_json(fits, cfg.sidecar("_fits.json"))


SCAN_HEADER = ["delta", "re(E1)", "im(E1)", "re(E2)", "im(E2)", "re(E3)", "im(E3)", "split_kind"]


def cmd_scan(cfg: RunConfig) -> None:
    """Eigenvalue trajectories through the exceptional point."""
    magnitude = DEFAULT_SPLIT[cfg.family]
    deltas = cfg.deltas or tuple(np.linspace(-magnitude, magnitude, 21).tolist())
    points = detuning_scan(cfg.family, cfg.phi_big, deltas)
    rows = [p.to_row() for p in points]
    if cfg.fmt == "json":
        _write_json(
            {
                "schema_version": SCHEMA_VERSION,
                "family": str(cfg.family),
                "Phi": cfg.phi_big,
                "points": [dict(zip(SCAN_HEADER, row, strict=True)) for row in rows],
            },
            cfg.output,
        )
        return
    with _open_output(cfg.output) as fh:
        fh.write(",".join(SCAN_HEADER) + "\n")
        for row in rows:
            fh.write(",".join(v if isinstance(v, str) else repr(float(v)) for v in row) + "\n")


HANDLERS: dict[str, Callable[[RunConfig], None]] = {
    "solve": cmd_solve,
    "correlate": cmd_correlate,
    "spectral": cmd_spectral,
    "floquet": cmd_floquet,
    "scan": cmd_scan,
}


def _global_flags(*, suppress: bool) -> argparse.ArgumentParser:
    # Sub-command copies must not overwrite values given before the sub-command.
    def default(value: Any) -> Any:
        return argparse.SUPPRESS if suppress else value

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--settings", default=default(None), help="settings module, e.g. config.settings.production")
    common.add_argument("--log-level", default=default(None), choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    common.add_argument("--output", "-o", default=default(None), help="artifact path; '-' or omitted writes to stdout")
    common.add_argument("--format", default=default("csv"), choices=FORMATS)
    return common


def _family_flags() -> argparse.ArgumentParser:
    family = argparse.ArgumentParser(add_help=False)
    family.add_argument("--family", choices=[str(f) for f in Family], required=True)
    angle = family.add_mutually_exclusive_group(required=True)
    angle.add_argument("--phi", type=float, help="Φ in radians")
    angle.add_argument("--pi-frac", type=pi_fraction, metavar="P/Q", help="Φ as an exact multiple of π")
    family.add_argument("--delta", type=float, help="detuning δ away from the exceptional point")
    return family


def build_parser() -> argparse.ArgumentParser:
    common, family = _global_flags(suppress=True), _family_flags()
    parser = argparse.ArgumentParser(
        prog="dualep",
        description=__doc__.splitlines()[0],
        epilog="Sites are half-integer labels x; site x is qubit 2x of the open chain of 2L qubits.",
        parents=[_global_flags(suppress=False)],
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", parents=[common, family], help="solve a family and write its bundle")
    solve.add_argument("--samples", type=int, default=0, help="also self-check this many sampled Φ")
    solve.add_argument("--seed", type=int, default=0)

    correlate = sub.add_parser("correlate", parents=[common, family], help="analytic vs. circuit correlators")
    correlate.add_argument("--t-max", type=int)
    correlate.add_argument("--ring-L", dest="ring_l", type=int, default=5)
    correlate.add_argument("--channels", type=channel_list, default=channel_list("xz,zz,xy"))
    correlate.add_argument("--site", type=float, help="starting site label (default 0.5, moving right)")

    spectral = sub.add_parser("spectral", parents=[common, family], help="Z-transform and Fourier blocks")
    spectral.add_argument("--t-max", type=int, help="terms in the numeric transform (default 200)")
    spectral.add_argument("--radius", type=float, default=1.2, help="|z| of the numeric grid")
    spectral.add_argument("--points", type=int, default=64)

    floquet = sub.add_parser("floquet", parents=[common, family], help="kicked-chain series and fits")
    floquet.add_argument("--t-max", type=int)
    floquet.add_argument("--ring-L", dest="ring_l", type=int, default=5)
    floquet.add_argument("--channels", type=channel_list, default=channel_list("xz"), help="first channel is used")
    floquet.add_argument("--site", type=float, help="starting site label (default 0, moving right)")

    scan = sub.add_parser("scan", parents=[common, family], help="eigenvalues across the detuning")
    scan.add_argument("--deltas", type=delta_grid, help="start:stop:num or a list")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.settings:
        settings.configure(args.settings)
    if args.log_level:
        # Touch settings first so dictConfig does not undo the override.
        _ = settings.LOG_LEVEL
        logging.getLogger().setLevel(args.log_level)

    try:
        with run_context(args.command, args.family):
            cfg = RunConfig.from_args(args)
            HANDLERS[cfg.command](cfg)
    except ParameterError as exc:
        console.print(f"[bold red]error:[/] {escape(str(exc))}", highlight=False, soft_wrap=True)
        return EXIT_PARAMETER
    except DualEPError as exc:
        console.print(f"[bold red]self-check failed:[/] {escape(str(exc))}", highlight=False, soft_wrap=True)
        return EXIT_SELF_CHECK
    return EXIT_OK
