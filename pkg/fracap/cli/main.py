"""fracap CLI Entry Point.

Command-line interface for running scenario files.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

import typer
from rich.console import Console

from .commands import EXIT_VALIDATION
from .commands import run as run_cmd
from .commands import validate as validate_cmd
from .config import setup_logging

app = typer.Typer(
    name="fracap",
    help="fracap - Fractional variable-exponent Sobolev capacities on grids",
    add_completion=False,
    no_args_is_help=True,
)
console = Console()


def _logging(level: Optional[str]) -> None:
    try:
        setup_logging(level)
    except ValueError as e:
        console.print(f"[red]Error:[/red] {e}")
        raise SystemExit(EXIT_VALIDATION)


@app.command()
def run(
    file: Path = typer.Argument(
        ...,
        help="Path to scenario JSON file",
    ),
    output: Optional[Path] = typer.Option(
        None,
        "-o",
        "--output",
        help="Report path (overrides the scenario's output)",
    ),
    format: str = typer.Option(
        "table",
        "-f",
        "--format",
        help="Output format: table, json",
    ),
    log_level: Optional[str] = typer.Option(
        None,
        "--log-level",
        help="Log level: DEBUG, INFO, WARNING, ERROR",
    ),
) -> None:
    """Run a scenario and report its verdicts.

    Exits 0 when every task passes, 1 on validation errors and 2 when a task
    fails.

    Examples:
        fracap run capacity.json
        fracap run capacity.json -o out/report.json
        fracap run axioms.json -f json --log-level INFO
    """
    _logging(log_level)
    run_cmd(file, output, format)


@app.command()
def validate(
    file: Path = typer.Argument(
        ...,
        help="Path to scenario JSON file",
    ),
) -> None:
    """Validate a scenario without running it.

    Every error is reported, not just the first.

    Examples:
        fracap validate capacity.json
    """
    _logging(None)
    validate_cmd(file)


@app.command()
def version() -> None:
    """Show fracap version."""
    from fracap import __version__

    console.print(f"fracap version {__version__}")


def main() -> None:
    """CLI entry point."""
    app()


if __name__ == "__main__":
    main()
