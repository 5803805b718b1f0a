"""JSON Output Formatters.

Provides JSON formatted output for CLI commands.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

from rich.console import Console
from rich.syntax import Syntax

if TYPE_CHECKING:
    from fracap.scenario.models import RunReport

console = Console()


def format_report_json(report: "RunReport", pretty: bool = True) -> None:
    """Print a run report in JSON format.

    Args:
        report: RunReport to display
        pretty: Whether to pretty-print with syntax highlighting
    """
    if pretty:
        json_str = report.model_dump_json(indent=2)
        syntax = Syntax(json_str, "json", theme="monokai")
        console.print(syntax)
    else:
        console.print_json(report.model_dump_json())
