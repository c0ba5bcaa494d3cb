"""
Environment configuration for the command-line tool
"""

import logging
import os
from typing import Optional

from dotenv import load_dotenv

from focusfuse.utils.errors import ConfigError


load_dotenv()


MAX_WORKERS_ENV = "FOCUSFUSE_MAX_WORKERS"
LOG_LEVEL_ENV = "FOCUSFUSE_LOG_LEVEL"

DEFAULT_MAX_WORKERS = min(4, os.cpu_count() or 1)
DEFAULT_LOG_LEVEL = "WARNING"


def get_max_workers() -> int:
    """
    Worker thread cap for parallel fusion and benchmarking

    Returns:
        Positive worker count, from FOCUSFUSE_MAX_WORKERS or the default
    """
    raw = os.getenv(MAX_WORKERS_ENV)

    if raw is None or not raw.strip():
        return DEFAULT_MAX_WORKERS

    try:
        workers = int(raw)
    except ValueError:
        raise ConfigError(f"{MAX_WORKERS_ENV} must be an integer, got {raw!r}")

    if workers < 1:
        raise ConfigError(f"{MAX_WORKERS_ENV} must be >= 1, got {workers}")

    return workers


def get_log_level(verbosity: int = 0) -> int:
    """
    Resolve the CLI log level

    Args:
        verbosity: Count of -v flags; 1 forces INFO, 2 or more forces DEBUG

    Returns:
        Numeric logging level
    """
    if verbosity >= 2:
        return logging.DEBUG
    if verbosity == 1:
        return logging.INFO

    name: Optional[str] = os.getenv(LOG_LEVEL_ENV, DEFAULT_LOG_LEVEL)
    level = logging.getLevelName(name.strip().upper())

    if not isinstance(level, int):
        raise ConfigError(f"{LOG_LEVEL_ENV} is not a log level: {name!r}")

    return level
