"""
Atomic file output and CSV table export
"""

import os
import tempfile
from pathlib import Path
from typing import Any, Dict, List, Union

import pandas as pd


PathLike = Union[str, os.PathLike]


def write_atomic(path: PathLike, data: bytes) -> None:
    """
    Write bytes to a file through a temporary sibling and a rename

    Args:
        path: Destination file
        data: File contents
    """
    target = Path(path)
    directory = target.parent if str(target.parent) else Path(".")

    fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp_name, target)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise


def rows_to_csv(rows: List[Dict[str, Any]], columns: List[str]) -> str:
    """
    Render table rows as CSV text

    Missing values are written as empty fields. Floats use six significant
    digits and lines end with LF.

    Args:
        rows: List of row dictionaries
        columns: Column order

    Returns:
        CSV text with a header row
    """
    df = pd.DataFrame(rows, columns=columns)

    return df.to_csv(index=False, float_format="%.6g", lineterminator="\n")


def write_csv(path: PathLike, rows: List[Dict[str, Any]], columns: List[str]) -> None:
    """
    Write table rows to a CSV file atomically

    Args:
        path: Destination file
        rows: List of row dictionaries
        columns: Column order
    """
    write_atomic(path, rows_to_csv(rows, columns).encode("ascii"))
