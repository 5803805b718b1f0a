"""Validate command implementation."""

from __future__ import annotations

from pathlib import Path

from rich.console import Console

from ...exceptions import ValidationError
from ...scenario import parse_scenario
from ..formatters import format_scenario_summary, format_validation_errors

console = Console()


def validate(file: Path) -> None:
    """Validate a scenario file without running it.

    Args:
        file: Path to scenario JSON file
    """
    console.print(f"[dim]Validating {file}...[/dim]\n")
    try:
        scenario = parse_scenario(file)
    except ValidationError as e:
        format_validation_errors(e.errors)
        raise SystemExit(1)

    format_scenario_summary(scenario)
