"""CLI Configuration.

Locates the YAML config file and configures logging for the CLI. The library
itself never installs handlers.
"""

from __future__ import annotations

import logging
from pathlib import Path

from rich.console import Console
from rich.logging import RichHandler

from ..config import CONFIG_PATHS, get_settings

# Load .env before settings are first read
try:
    from dotenv import load_dotenv

    load_dotenv()
except ImportError:
    pass

LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]


def find_config_file() -> Path | None:
    """Find the config file that takes effect.

    Later entries in CONFIG_PATHS override earlier ones, so the last existing
    file is returned.

    Returns:
        Path to config file or None if not found
    """
    found = None
    for path in CONFIG_PATHS:
        if path.exists():
            found = path
    return found


def resolve_log_level(level: str | None) -> str:
    """Pick the explicit level, or the configured one.

    Raises:
        ValueError: If the level name is unknown
    """
    name = (level or get_settings().log_level).upper()
    if name not in LOG_LEVELS:
        raise ValueError(f"Unknown log level '{name}' (expected one of {', '.join(LOG_LEVELS)})")
    return name


def setup_logging(level: str | None = None) -> None:
    """Route fracap log records to stderr through rich.

    Args:
        level: Level name; defaults to FRACAP_LOG_LEVEL or the config file
    """
    name = resolve_log_level(level)
    handler = RichHandler(
        console=Console(stderr=True),
        show_path=False,
        rich_tracebacks=True,
    )
    handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))

    logger = logging.getLogger("fracap")
    logger.handlers = [handler]
    logger.setLevel(name)
    logger.propagate = False
