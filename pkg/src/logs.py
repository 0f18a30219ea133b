"""
Logging setup
"""

import logging
from pathlib import Path

from rich.logging import RichHandler

from .environs import LOG_LEVEL

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def setup_logging(level: str = LOG_LEVEL) -> None:
    """
    Routes every `src.*` logger through a rich console handler
    """
    root = logging.getLogger("src")
    root.setLevel(level.upper())
    if not any(isinstance(handler, RichHandler) for handler in root.handlers):
        root.addHandler(RichHandler(rich_tracebacks=True, show_path=False))
    root.propagate = False


def attach_run_log(log_file: Path) -> logging.Handler:
    """
    Adds a plain file handler for the run's diagnostics log.
    Caller removes it with `detach_run_log` when the run ends.
    """
    log_file.parent.mkdir(parents=True, exist_ok=True)
    handler = logging.FileHandler(log_file, mode="w", encoding="utf-8")
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logging.getLogger("src").addHandler(handler)
    return handler


def detach_run_log(handler: logging.Handler) -> None:
    logging.getLogger("src").removeHandler(handler)
    handler.close()
