"""Rich Table Formatters.

Provides formatted table output for CLI commands.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Any

from rich.console import Console
from rich.panel import Panel
from rich.table import Table
from rich.text import Text

if TYPE_CHECKING:
    from fracap.scenario.models import RunReport, Scenario, TaskResult

console = Console()

VERDICT_STYLES = {
    "pass": "green",
    "fail": "red",
    "inapplicable": "yellow",
}

# Data keys shown in the summary column, in order of preference
SUMMARY_KEYS = [
    "total",
    "value",
    "sobolev_norm",
    "member",
    "removable",
    "verdict",
    "capacity",
    "max_discrepancy",
    "tail_bound",
    "polar_bound",
    "iterations",
    "residual",
]


def _format_value(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    if isinstance(value, (list, dict)):
        return f"<{len(value)} entries>"
    return str(value)


def _summarize(result: "TaskResult") -> str:
    parts = [f"{key}={_format_value(result.data[key])}" for key in SUMMARY_KEYS if key in result.data]
    return ", ".join(parts[:3]) or "-"


def format_run_report(report: "RunReport") -> None:
    """Print a run report: one row per task result, then the verdict.

    Args:
        report: RunReport to display
    """
    table = Table(title=f"fracap {report.tool_version} ({report.scenario_hash[:12]})")
    table.add_column("Task", style="cyan", no_wrap=True)
    table.add_column("Verdict")
    table.add_column("Summary")
    table.add_column("Message", style="dim")

    for result in report.results:
        style = VERDICT_STYLES[result.verdict]
        table.add_row(
            result.task,
            f"[{style}]{result.verdict}[/{style}]",
            _summarize(result),
            result.message or "-",
        )

    if report.results:
        console.print(table)
    else:
        console.print("[yellow]No task results.[/yellow]")

    for result in report.results:
        if result.series:
            series = Table(title=f"{result.task} series", show_header=True)
            series.add_column("Resolution", justify="right")
            series.add_column("Value", justify="right")
            for point in result.series:
                series.add_row(str(point.resolution), f"{point.value:.6g}")
            console.print(series)

    seconds = sum(entry.seconds for entry in report.timing)
    if report.passed:
        console.print(
            Panel(Text("Run Passed", style="bold green"), title="Result", border_style="green")
        )
    else:
        console.print(
            Panel(Text("Run Failed", style="bold red"), title="Result", border_style="red")
        )
    console.print(f"[dim]{seconds:.3f}s[/dim]")


def format_validation_errors(errors: list[str]) -> None:
    """Print every validation error.

    Args:
        errors: Validation error messages
    """
    console.print(
        Panel(Text("Validation Failed", style="bold red"), title="Result", border_style="red")
    )
    console.print("\n[red bold]Errors:[/red bold]")
    for i, error in enumerate(errors, 1):
        console.print(f"  {i}. {error}")
    console.print(f"\n[red]{len(errors)} error(s)[/red]")


def format_scenario_summary(scenario: "Scenario") -> None:
    """Print a validated scenario.

    Args:
        scenario: Scenario to display
    """
    console.print(
        Panel(Text("Validation Passed", style="bold green"), title="Result", border_style="green")
    )
    table = Table(show_header=False, box=None)
    table.add_column("Field", style="cyan")
    table.add_column("Value")

    table.add_row("Task", scenario.task)
    table.add_row("Domain", f"{scenario.domain.type} {scenario.domain.bounds}")
    table.add_row("Holes", str(len(scenario.domain.holes)))
    table.add_row("Resolution", ", ".join(map(str, scenario.resolutions)))
    table.add_row("s", f"{scenario.s:g}")
    table.add_row("q", _describe_exponent(scenario.q))
    table.add_row("p", _describe_exponent(scenario.p))
    table.add_row("Seed", str(scenario.seed))
    table.add_row("Output", scenario.output or "-")

    console.print(table)


def _describe_exponent(spec: Any) -> str:
    if isinstance(spec, list):
        return "table"
    return str(spec)
