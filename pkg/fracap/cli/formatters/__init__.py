"""CLI Output Formatters.

Provides table and JSON output formatting for CLI commands.
"""

from .json_output import format_report_json
from .table import format_run_report, format_scenario_summary, format_validation_errors

__all__ = [
    "format_report_json",
    "format_run_report",
    "format_scenario_summary",
    "format_validation_errors",
]
