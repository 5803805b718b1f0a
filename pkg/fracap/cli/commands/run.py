"""Run command implementation."""

from __future__ import annotations

import logging
from pathlib import Path

from rich.console import Console

from ...exceptions import ReportWriteError, ValidationError
from ...scenario import emit_report, load_scenario_context, run_scenario
from ..formatters import format_report_json, format_run_report, format_validation_errors

console = Console()
logger = logging.getLogger(__name__)

EXIT_VALIDATION = 1
EXIT_TASK_FAILED = 2


def run(file: Path, output: Path | None = None, format: str = "table") -> None:
    """Run a scenario file and print its report.

    The report is written to --output, or to the scenario's own output path
    when the flag is absent.

    Args:
        file: Path to scenario JSON file
        output: Report destination, overriding the scenario's
        format: Output format (table, json)
    """
    if format not in ("table", "json"):
        console.print(f"[red]Error:[/red] Unknown format '{format}' (expected table or json)")
        raise SystemExit(EXIT_VALIDATION)

    try:
        ctx = load_scenario_context(file)
        scenario = ctx.scenario
        report = run_scenario(scenario, ctx)
    except ValidationError as e:
        format_validation_errors(e.errors)
        raise SystemExit(EXIT_VALIDATION)

    target = output or (Path(scenario.output) if scenario.output else None)
    if target is not None:
        try:
            written = emit_report(report, target)
        except ReportWriteError as e:
            console.print(f"[red]Error:[/red] {e}")
            raise SystemExit(EXIT_TASK_FAILED)
    else:
        written = []

    if format == "json":
        format_report_json(report)
    else:
        format_run_report(report)
        for path in written:
            console.print(f"[dim]Wrote {path}[/dim]")

    if not report.passed:
        raise SystemExit(EXIT_TASK_FAILED)
