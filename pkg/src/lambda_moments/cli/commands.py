"""Analysis commands for the lamom CLI.

- analyze: all criteria for a state file under a map
- sweep: CSV of criteria over Horodecki's family
- threshold: detection threshold of one criterion by bisection
- verify-operators: measurement operators against spectrum moments
- simulate: shot-noise estimate of q_k
"""

from __future__ import annotations

import csv
import functools
import json
import logging
import sys
from typing import TYPE_CHECKING, Any, Callable, TypeVar

import click
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from lambda_moments.errors import LambdaMomentsError, VerificationFailed
from lambda_moments.utils.formatter import (
    format_csv_cell,
    format_threshold,
    json_ready,
)

if TYPE_CHECKING:
    from lambda_moments.maps import PositiveMapSpec

logger = logging.getLogger(__name__)

console = Console()
err_console = Console(stderr=True)

F = TypeVar("F", bound=Callable[..., Any])

REPORT_FIELDS = ("criterion_id", "value", "bound", "margin", "verdict", "detail")
OPERATOR_TOL = 1e-9
PROBE_TRIALS = 100


def exits_on_error(fn: F) -> F:
    """Turn library errors into a message on stderr and the error's exit code."""

    @functools.wraps(fn)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return fn(*args, **kwargs)
        except LambdaMomentsError as e:
            err_console.print(f"[red]Error:[/red] {escape(str(e))}")
            raise SystemExit(e.exit_code) from e

    return wrapper  # type: ignore[return-value]


def _echo_json(data: Any) -> None:
    click.echo(json.dumps(json_ready(data), indent=2))


def _resolve_checked_map(
    map_name: str, dim: int
) -> tuple[PositiveMapSpec, float | None]:
    """
    Resolve --map, probing positivity of anything that is not built in.

    Returns the map and the probe's smallest eigenvalue (None for built-in
    maps). A negative probe result is printed as a warning.
    """
    from lambda_moments.maps import positivity_probe, resolve_map

    lam = resolve_map(map_name, dim)
    if lam.provenance == "builtin":
        return lam, None
    lowest = positivity_probe(lam, PROBE_TRIALS, seed=0)
    if lowest < 0:
        err_console.print(
            f"[yellow]Warning:[/yellow] map '{escape(lam.name)}' is not positive "
            f"(probe eigenvalue {lowest:.3e}); verdicts are not meaningful"
        )
    return lam, lowest


map_option = click.option(
    "--map",
    "map_name",
    default="lambda1",
    show_default=True,
    help="Built-in map name (identity, transpose, lambda1) or a map JSON file",
)


@click.command()
@click.argument("state_path", type=click.Path(dir_okay=False))
@map_option
@click.option(
    "--json/--no-json",
    "as_json",
    default=True,
    help="Print the report as JSON (default) or as a table",
)
@click.option(
    "--tol",
    type=click.FloatRange(min=1e-15),
    default=None,
    help="Report tolerance for verdicts (config default 1e-9)",
)
@click.option(
    "--include-rank",
    is_flag=True,
    help="Append the q0 rank consistency check",
)
@exits_on_error
def analyze(
    state_path: str,
    map_name: str,
    as_json: bool,
    tol: float | None,
    include_rank: bool,
) -> None:
    """Run every criterion on a state file.

    Example:
        lamom analyze state.json --map lambda1
    """
    from lambda_moments.moments import full_report
    from lambda_moments.states import from_file

    rho = from_file(state_path)
    lam, probe_min = _resolve_checked_map(map_name, rho.dims.dB)
    reports = full_report(
        rho, lam, include_rank=include_rank, report_tol=tol, probe_min=probe_min
    )
    rows = [
        {field: report.model_dump(mode="json")[field] for field in REPORT_FIELDS}
        for report in reports
    ]
    if as_json:
        _echo_json(rows)
        return

    table = Table(title=f"{rho.label} under {lam.name} ({lam.provenance})")
    for field in REPORT_FIELDS:
        table.add_column(field)
    for row in json_ready(rows, digits=6):
        table.add_row(*(str(row[field]) for field in REPORT_FIELDS))
    console.print(table)


@click.command()
@click.option(
    "--family",
    type=click.Choice(["horodecki"]),
    default="horodecki",
    show_default=True,
    help="State family to sweep",
)
@click.option("--from", "start", type=float, default=2.0, show_default=True)
@click.option("--to", "stop", type=float, default=5.0, show_default=True)
@click.option(
    "--steps",
    type=click.IntRange(min=2),
    default=301,
    show_default=True,
    help="Number of evenly spaced grid points, endpoints included",
)
@map_option
@click.option(
    "--out",
    type=click.Path(dir_okay=False, writable=True),
    default=None,
    help="CSV output file (standard output if omitted)",
)
@click.option(
    "--workers",
    type=click.IntRange(min=1),
    default=None,
    help="Worker threads (config default 1)",
)
@exits_on_error
def sweep(
    family: str,
    start: float,
    stop: float,
    steps: int,
    map_name: str,
    out: str | None,
    workers: int | None,
) -> None:
    """Write criteria over a grid of the family parameter as CSV.

    Example:
        lamom sweep --from 2 --to 5 --steps 301 --out fig.csv
    """
    from lambda_moments.sweep import CSV_COLUMNS, sweep_horodecki

    lam, _ = _resolve_checked_map(map_name, 3)
    rows = sweep_horodecki(start, stop, steps, lam, workers)

    def write(stream: Any) -> None:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            values = row.model_dump()
            writer.writerow([format_csv_cell(values[col]) for col in CSV_COLUMNS])

    if out is None:
        write(sys.stdout)
        return
    with open(out, "w", encoding="utf-8", newline="") as stream:
        write(stream)
    err_console.print(f"[green]Wrote {len(rows)} rows ({family}) to {out}[/green]")


@click.command()
@click.option(
    "--family",
    type=click.Choice(["horodecki"]),
    default="horodecki",
    show_default=True,
)
@click.option(
    "--criterion",
    type=click.Choice(["q3", "q3o", "ppt3o"]),
    required=True,
    help="q3: q3 - q2²; q3o: optimized q3 bound; ppt3o: optimized PT bound",
)
@map_option
@click.option(
    "--tol",
    type=click.FloatRange(min=1e-9),
    default=1e-6,
    show_default=True,
    help="Final bracket width",
)
@exits_on_error
def threshold(family: str, criterion: str, map_name: str, tol: float) -> None:
    """Locate the parameter where a criterion starts detecting entanglement.

    Example:
        lamom threshold --criterion q3o --map lambda1
    """
    from lambda_moments.sweep import find_threshold

    lam, _ = _resolve_checked_map(map_name, 3)
    logger.info("Threshold search on %s for %s under %s", family, criterion, lam.name)
    click.echo(format_threshold(find_threshold(criterion, lam, tol)))


@click.command(name="verify-operators")
@click.option(
    "--k",
    "k",
    type=click.IntRange(2, 3),
    default=3,
    show_default=True,
    help="Number of copies (2 or 3)",
)
@click.option("--a", "a", type=float, default=3.5, show_default=True)
@map_option
@exits_on_error
def verify_operators(k: int, a: float, map_name: str) -> None:
    """Compare Tr[O^(k) σ_a^⊗k] with q_k from the spectrum.

    For lambda1 the explicit two- and three-copy operators are checked too.

    Example:
        lamom verify-operators --k 3 --a 4.0
    """
    from lambda_moments.maps import normalized_image, provenance_note
    from lambda_moments.measurement import (
        build_observable,
        expectation,
        explicit_observable,
        explicit_vb3_residuals,
    )
    from lambda_moments.moments import moments_of
    from lambda_moments.states import horodecki_state

    rho = horodecki_state(a)
    lam, probe_min = _resolve_checked_map(map_name, 3)
    obs = build_observable(lam, rho.dims, k)
    exact = moments_of(normalized_image(lam, rho)).moment(k)
    measured = expectation(obs, rho)

    result: dict[str, Any] = {
        "k": k,
        "a": a,
        "map": lam.name,
        "map_provenance": provenance_note(lam, probe_min),
        "exact": exact,
        "expectation": measured,
        "difference": abs(measured - exact),
    }
    worst = result["difference"]
    if lam.name == "lambda1" and k in (2, 3):
        explicit = expectation(explicit_observable(k), rho)
        result["explicit_expectation"] = explicit
        result["explicit_difference"] = abs(explicit - exact)
        worst = max(worst, result["explicit_difference"])
        if k == 3:
            residual, adjoint_residual = explicit_vb3_residuals()
            result["vb3_residual"] = residual
            result["vb3_adjoint_residual"] = adjoint_residual

    _echo_json(result)
    if worst > OPERATOR_TOL:
        raise VerificationFailed(
            f"Operator expectation differs from q_{k} by {worst:.3e}",
            difference=worst,
        )


@click.command()
@click.option("--k", "k", type=click.IntRange(min=1), default=2, show_default=True)
@click.option("--a", "a", type=float, default=3.5, show_default=True)
@click.option(
    "--shots",
    type=click.IntRange(min=1),
    default=100_000,
    show_default=True,
)
@click.option("--seed", type=int, default=0, show_default=True)
@map_option
@exits_on_error
def simulate(k: int, a: float, shots: int, seed: int, map_name: str) -> None:
    """Estimate q_k from simulated measurements of O^(k) on σ_a.

    Example:
        lamom simulate --k 2 --a 3.5 --shots 100000 --seed 7
    """
    from lambda_moments.maps import normalized_image, provenance_note
    from lambda_moments.measurement import born_sample, build_observable
    from lambda_moments.moments import moments_of
    from lambda_moments.states import horodecki_state

    rho = horodecki_state(a)
    lam, probe_min = _resolve_checked_map(map_name, 3)
    obs = build_observable(lam, rho.dims, k)
    estimate = born_sample(obs, rho, shots, seed)
    exact = moments_of(normalized_image(lam, rho)).moment(k)
    # Undefined without spread, e.g. a single shot
    z_score = None
    if estimate.stderr > 0:
        z_score = (estimate.mean - exact) / estimate.stderr

    _echo_json(
        {
            **estimate.model_dump(),
            "exact": exact,
            "z_score": z_score,
            "map_provenance": provenance_note(lam, probe_min),
        }
    )
