"""
synth command - generate a synthetic multifocus pair
"""

import logging
from typing import Optional, Tuple

import click
import numpy as np

from focusfuse.components.imgcore import Image, load_pnm, quantize, save_pnm
from focusfuse.components.synth import FocusMask, make_pair, test_chart
from focusfuse.utils.formatting import format_dims
from focusfuse.utils.output import PathLike


logger = logging.getLogger(__name__)


def load_ground_truth(gt_path: Optional[PathLike], chart: Optional[Tuple[int, int]], seed: int) -> Image:
    """
    Ground truth from a PGM file or a generated test chart

    A generated chart is quantized to 8 bits so it matches what a saved
    ground truth would load back as.

    Args:
        gt_path: Ground truth file, or None
        chart: (H, W) of a test chart, used when gt_path is None
        seed: Chart seed

    Returns:
        Ground truth image
    """
    if gt_path is not None:
        return load_pnm(gt_path)

    height, width = chart
    return quantize(test_chart(height, width, seed)).astype(np.float64)


def run_synth_command(
    gt_path: Optional[PathLike],
    chart: Optional[Tuple[int, int]],
    seed: int,
    mask: FocusMask,
    sigma: float,
    out_a: PathLike,
    out_b: PathLike,
    out_gt: Optional[PathLike] = None
) -> int:
    """
    Write a synthetic multifocus pair

    Args:
        gt_path: Ground truth file, or None to use a chart
        chart: Chart dims (H, W)
        seed: Chart seed
        mask: Focus mask of input A
        sigma: Blur of the out-of-focus regions
        out_a: Destination of input A
        out_b: Destination of input B
        out_gt: Optional destination of the ground truth

    Returns:
        Exit code
    """
    gt = load_ground_truth(gt_path, chart, seed)
    logger.info(f"Ground truth {format_dims(gt.shape)} from {gt_path or 'test chart'}")

    a, b = make_pair(gt, mask, sigma)

    outputs = [(out_a, a), (out_b, b)]
    if out_gt is not None:
        outputs.append((out_gt, gt))

    for path, img in outputs:
        save_pnm(img, path)
        click.echo(f"{path}: {format_dims(img.shape)} mask={mask.kind.value} sigma={sigma:g}")

    return 0
