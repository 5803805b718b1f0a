"""Report Writer.

Writes a RunReport as JSON and every refinement series next to it as CSV with
header "resolution,value".
"""

from __future__ import annotations

import csv
import logging
from pathlib import Path

from pydantic import ValidationError as PydanticValidationError

from ..exceptions import ReportWriteError
from .models import RunReport

logger = logging.getLogger(__name__)

SERIES_HEADER = ["resolution", "value"]


def series_path(path: Path, ordinal: int) -> Path:
    """CSV path for the ordinal-th series result (0-based) of a report at path."""
    suffix = "_series.csv" if ordinal == 0 else f"_series_{ordinal + 1}.csv"
    return path.with_name(path.stem + suffix)


def emit_report(report: RunReport, path: Path | str) -> list[Path]:
    """Write the report and its series files.

    Args:
        report: Report to write
        path: Destination of the JSON report

    Returns:
        Paths written, report first

    Raises:
        ReportWriteError: On any I/O failure
    """
    path = Path(path)
    written = [path]
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
        series_results = [result for result in report.results if result.series]
        for ordinal, result in enumerate(series_results):
            target = series_path(path, ordinal)
            with open(target, "w", newline="", encoding="utf-8") as f:
                writer = csv.writer(f)
                writer.writerow(SERIES_HEADER)
                for point in result.series:
                    writer.writerow([point.resolution, repr(point.value)])
            written.append(target)
    except OSError as e:
        raise ReportWriteError(path, str(e)) from e
    logger.info(f"Wrote {', '.join(str(p) for p in written)}")
    return written


def load_report(path: Path | str) -> RunReport:
    """Read a report written by emit_report.

    Raises:
        ReportWriteError: If the file is unreadable or not a valid report
    """
    path = Path(path)
    try:
        return RunReport.model_validate_json(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise ReportWriteError(path, str(e)) from e
    except PydanticValidationError as e:
        raise ReportWriteError(path, f"not a valid report: {e.error_count()} errors") from e
