"""
Logging setup shared by the library and the CLI.

Library modules only create loggers with ``logging.getLogger(__name__)``;
handlers are installed here, once, by the application.
"""

import logging
from typing import Optional

from rich.console import Console
from rich.logging import RichHandler

from .config import get_config

_CONFIGURED = False


def configure_logging(level: Optional[str] = None) -> logging.Logger:
    """Attach a rich handler on stderr to the package logger.

    Args:
        level: Level name; falls back to ``BPL_LOG`` via the package config.

    Returns:
        The ``bellprocess`` logger.
    """
    global _CONFIGURED
    level_name = (level or get_config()["log_level"] or "WARNING").upper()
    logger = logging.getLogger("bellprocess")
    logger.setLevel(getattr(logging, level_name, logging.WARNING))
    if not _CONFIGURED:
        handler = RichHandler(
            console=Console(stderr=True),
            show_path=False,
            rich_tracebacks=True,
        )
        handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
        logger.addHandler(handler)
        logger.propagate = False
        _CONFIGURED = True
    return logger
