"""
metrics command - evaluate a fused image
"""

import logging
from typing import Optional

import click

from focusfuse.components.imgcore import load_pnm
from focusfuse.components.metrics import fusion_rmse
from focusfuse.utils.formatting import format_metric
from focusfuse.utils.output import PathLike, write_csv


logger = logging.getLogger(__name__)


METRICS_COLUMNS = ["rmse1", "rmse2", "rmse", "rmse_gt", "sf_a", "sf_b", "sf_f"]


def run_metrics_command(
    path_a: PathLike,
    path_b: PathLike,
    path_fused: PathLike,
    gt_path: Optional[PathLike] = None,
    csv_path: Optional[PathLike] = None
) -> int:
    """
    Print RMSE and spatial frequency figures for a fused image

    Args:
        path_a: Input A
        path_b: Input B
        path_fused: Fused image
        gt_path: Optional ground truth
        csv_path: Optional CSV destination

    Returns:
        Exit code
    """
    a = load_pnm(path_a)
    b = load_pnm(path_b)
    fused = load_pnm(path_fused)
    gt = load_pnm(gt_path) if gt_path is not None else None

    report = fusion_rmse(a, b, fused, ground_truth=gt)
    logger.info(f"Evaluated {path_fused} against {path_a} and {path_b}")
    row = report.to_row()

    for name in METRICS_COLUMNS:
        if row[name] is not None:
            click.echo(f"{name} = {format_metric(row[name])}")

    if csv_path is not None:
        write_csv(csv_path, [row], METRICS_COLUMNS)
        click.echo(f"{csv_path}: 1 row")

    return 0
