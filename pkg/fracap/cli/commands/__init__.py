"""CLI Commands.

Individual command implementations for the fracap CLI.
"""

from .run import EXIT_TASK_FAILED, EXIT_VALIDATION, run
from .validate import validate

__all__ = [
    "EXIT_TASK_FAILED",
    "EXIT_VALIDATION",
    "run",
    "validate",
]
