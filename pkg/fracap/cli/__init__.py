"""fracap Command-Line Interface.

Run and validate scenario files from the shell.
"""

from .main import app, main

__all__ = ["app", "main"]
