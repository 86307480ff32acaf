"""Main CLI entry point for Λ-moment entanglement detection.

Usage:
    lamom --help
    lamom analyze state.json --map lambda1
    lamom sweep --from 2 --to 5 --steps 301 --out fig.csv
    lamom threshold --criterion q3o
    lamom verify-operators --k 3 --a 4.0
    lamom simulate --k 2 --a 3.5 --shots 100000 --seed 7
"""

import logging

import click
from pydantic import ValidationError
from rich.console import Console
from rich.markup import escape

from lambda_moments import __version__
from lambda_moments.cli.commands import (
    analyze,
    simulate,
    sweep,
    threshold,
    verify_operators,
)
from lambda_moments.config import get_config
from lambda_moments.errors import EXIT_INVALID_INPUT
from lambda_moments.utils.logging_helpers import setup_logging

DEFAULT_DIM_LIMIT = 2048

logger = logging.getLogger(__name__)


@click.group()
@click.version_option(version=__version__, prog_name="lamom")
@click.option("--verbose", "-v", is_flag=True, help="Log debug output to stderr")
def cli(verbose: bool) -> None:
    """Entanglement detection with Λ-moments.

    Commands:
        analyze           - Run every criterion on a state file
        sweep             - CSV of criteria over Horodecki's 3x3 family
        threshold         - Detection threshold of one criterion
        verify-operators  - Check measurement operators against spectra
        simulate          - Shot-noise estimate of a moment
    """
    try:
        config = get_config()
    except ValidationError as e:
        message = escape(str(e))
        Console(stderr=True).print(f"[red]Invalid configuration:[/red] {message}")
        raise SystemExit(EXIT_INVALID_INPUT) from e

    setup_logging(config.log_level, debug=verbose or config.debug)
    if config.dim_limit != DEFAULT_DIM_LIMIT:
        logger.info("Operator dimension limit set to %d", config.dim_limit)


cli.add_command(analyze)
cli.add_command(sweep)
cli.add_command(threshold)
cli.add_command(verify_operators)
cli.add_command(simulate)


def main() -> None:
    """Entry point for the CLI."""
    cli()


if __name__ == "__main__":
    main()
