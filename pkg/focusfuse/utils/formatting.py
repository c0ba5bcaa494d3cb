"""
Formatting and parsing utilities for the command-line tool
"""

import re
from typing import List, Optional, Tuple

from focusfuse.utils.errors import ConfigError


_DIMS_RE = re.compile(r"^\s*(\d+)\s*[xX]\s*(\d+)\s*$")


def format_dims(shape: Tuple[int, ...]) -> str:
    """
    Format an image shape as HxW

    Args:
        shape: Array shape (rows, cols)

    Returns:
        Formatted dimension string
    """
    return f"{shape[0]}x{shape[1]}"


def format_metric(value: Optional[float], digits: int = 6) -> str:
    """
    Format a metric value with a fixed number of significant digits

    Args:
        value: Metric value
        digits: Significant digits

    Returns:
        Formatted value, or "N/A"
    """
    if value is None:
        return "N/A"

    return f"{value:.{digits}g}"


def parse_dims(text: str) -> Tuple[int, int]:
    """
    Parse an HxW dimension string

    Args:
        text: String such as "256x256"

    Returns:
        Tuple of (height, width)
    """
    match = _DIMS_RE.match(text)
    if not match:
        raise ConfigError(f"expected HxW, got {text!r}")

    return int(match.group(1)), int(match.group(2))


def parse_block(text: str) -> Tuple[int, int]:
    """
    Parse a block size given as M or MxN

    Args:
        text: String such as "8" or "8x16"

    Returns:
        Tuple of (block_rows, block_cols)
    """
    if text.strip().isdigit():
        size = int(text)
        return size, size

    try:
        return parse_dims(text)
    except ConfigError:
        raise ConfigError(f"expected M or MxN, got {text!r}")


def parse_depths(text: str) -> List[int]:
    """
    Parse a comma separated list of directional filter bank depths

    Args:
        text: String such as "2,3"

    Returns:
        List of depths
    """
    parts = [p.strip() for p in text.split(",")]

    if not parts or not all(p.isdigit() for p in parts):
        raise ConfigError(f"expected comma separated depths, got {text!r}")

    return [int(p) for p in parts]
