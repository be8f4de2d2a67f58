"""
Command line entry point.

    dafermos-dg <experiment> [--scheme S] [--ic I] [--p P] [--n N] [--cfl C]
                [--t-end T] [--out PATH] [--config FILE] [-v]

Exit codes: 0 completed, 1 usage error, 2 blow-up, 3 I/O failure.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Optional, Sequence

import click

from .config import parse_config
from .errors import UsageError
from .experiments import EXIT_USAGE, execute
from .logging import get_logger, set_verbosity

logger = get_logger("cli")


@click.command(name="dafermos-dg", context_settings={"help_option_names": ["-h", "--help"]})
@click.argument("experiment", required=False)
@click.option("--scheme", help="ddg, drkdg, godunov or vanilla-dg")
@click.option("--ic", help="sine-shock, rarefaction or smooth")
@click.option("--p", "p", type=int, help="polynomial order")
@click.option("--n", "n_cells", type=int, help="number of cells")
@click.option("--cfl", type=float, help="CFL number")
@click.option("--t-end", "t_end", type=float, help="end time")
@click.option("--outputs", type=int, help="number of equally spaced output times")
@click.option("--reference-cells", "reference_cells", type=int, help="Godunov cells of the entropy comparison")
@click.option("--gradient-steps", "gradient_steps", type=int, help="descent iterations per DRKDG step")
@click.option("--out", "out_path", type=click.Path(dir_okay=False, path_type=Path), help="CSV output file")
@click.option("--config", "config_file", type=click.Path(dir_okay=False, path_type=Path), help="key = value file")
@click.option("-v", "--verbose", count=True, help="-v for INFO, -vv for DEBUG")
def command(experiment: Optional[str], config_file: Optional[Path], verbose: int, **flags: object) -> int:
    """Run one experiment (run, converge, entropy, dafermos, blowup) and write its CSV."""
    set_verbosity({0: logging.WARNING, 1: logging.INFO}.get(verbose, logging.DEBUG))
    try:
        config = parse_config(experiment, flags, config_file)
    except UsageError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_USAGE
    logger.info("resolved config %s", config.to_json())
    return execute(config)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the command line and return its exit code."""
    try:
        code = command.main(args=list(argv) if argv is not None else None, standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    return int(code or 0)


__all__ = ["command", "main"]
