"""Logging for the rips-collapse toolkit.

Console output goes to stderr so that dumps on stdout stay pipeable. Setting
LOG_FILE adds a rotating file handler that always records DEBUG.
"""

import logging
import logging.handlers
import sys
from pathlib import Path

from config import LOG_FILE, LOG_LEVEL

SIMPLE_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"
DETAILED_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(funcName)s:%(lineno)d - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

_configured: set[str] = set()


def _level(name: str) -> int:
    return getattr(logging, name.upper(), logging.INFO)


def _console_handler(level: str) -> logging.Handler:
    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(_level(level))
    detailed = level.upper() == "DEBUG"
    handler.setFormatter(logging.Formatter(DETAILED_FORMAT if detailed else SIMPLE_FORMAT, DATE_FORMAT))
    return handler


def _file_handler(path: str) -> logging.Handler:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    handler = logging.handlers.RotatingFileHandler(path, maxBytes=10_000_000, backupCount=5, encoding="utf-8")
    handler.setLevel(logging.DEBUG)
    handler.setFormatter(logging.Formatter(DETAILED_FORMAT, DATE_FORMAT))
    return handler


def get_logger(name: str | None = None) -> logging.Logger:
    """Logger for a module (pass __name__), configured on first use."""
    logger = logging.getLogger(name or "rips_collapse")
    if logger.name in _configured:
        return logger

    logger.setLevel(_level(LOG_LEVEL))
    logger.addHandler(_console_handler(LOG_LEVEL))
    if LOG_FILE:
        logger.addHandler(_file_handler(LOG_FILE))
    # Handlers live on each module logger
    logger.propagate = False
    _configured.add(logger.name)
    return logger


def set_log_level(level: str) -> None:
    """Apply --log-level to every logger handed out so far; file handlers keep DEBUG."""
    for name in _configured:
        logger = logging.getLogger(name)
        logger.setLevel(_level(level))
        for handler in logger.handlers:
            if not isinstance(handler, logging.handlers.RotatingFileHandler):
                handler.setLevel(_level(level))
