"""
bench command - synthesize a pair, fuse it with every method and tabulate the errors
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import click
import numpy as np

from focusfuse.commands.synth import load_ground_truth
from focusfuse.components.fusion import FusionConfig, FusionMethod, fuse
from focusfuse.components.imgcore import Image, quantize, save_pnm
from focusfuse.components.metrics import fusion_rmse
from focusfuse.components.synth import FocusMask, make_pair
from focusfuse.utils.formatting import format_dims, format_metric
from focusfuse.utils.output import PathLike, write_csv
from focusfuse.utils.settings import get_max_workers


logger = logging.getLogger(__name__)


BENCH_METHODS = (
    FusionMethod.WAVELET_MAX,
    FusionMethod.SPATIAL_SF,
    FusionMethod.WAVELET_SF,
    FusionMethod.CONTOURLET_SF,
)

BENCH_COLUMNS = ["method", "rmse1", "rmse2", "rmse", "rmse_gt"]


def _as_stored(img: Image) -> Image:
    # what the image reads back as once written to an 8-bit PGM
    return quantize(img).astype(np.float64)


def bench_rows(gt: Image, mask: FocusMask, sigma: float, cfg: Optional[FusionConfig] = None) -> Tuple[List[Dict[str, Any]], Dict[str, Image]]:
    """
    Evaluate every fusion method on one synthetic pair

    Inputs and fused outputs are quantized to 8 bits before measuring, so
    the figures match what the files on disk would give.

    Args:
        gt: Ground truth
        mask: Focus mask of input A
        sigma: Blur of the out-of-focus regions
        cfg: Shared fusion parameters; the method field is overridden

    Returns:
        (rows in BENCH_METHODS order, images keyed gt, a, b and fused-<method>)
    """
    cfg = cfg or FusionConfig()
    gt = _as_stored(gt)
    a, b = (_as_stored(img) for img in make_pair(gt, mask, sigma))

    def run_method(method: FusionMethod) -> Image:
        return _as_stored(fuse(a, b, replace(cfg, method=method)))

    with ThreadPoolExecutor(max_workers=get_max_workers()) as pool:
        fused = list(pool.map(run_method, BENCH_METHODS))

    rows = []
    images = {"gt": gt, "a": a, "b": b}

    for method, f in zip(BENCH_METHODS, fused):
        report = fusion_rmse(a, b, f, ground_truth=gt)
        rows.append({
            "method": method.value,
            "rmse1": report.rmse1,
            "rmse2": report.rmse2,
            "rmse": report.rmse,
            "rmse_gt": report.rmse_gt,
        })
        images[f"fused-{method.value}"] = f

    return rows, images


def run_bench_command(
    gt_path: Optional[PathLike],
    chart: Optional[Tuple[int, int]],
    seed: int,
    mask: FocusMask,
    sigma: float,
    csv_path: PathLike,
    out_dir: Optional[PathLike] = None
) -> int:
    """
    Run the four-method benchmark and write its CSV table

    Args:
        gt_path: Ground truth file, or None to use a chart
        chart: Chart dims (H, W)
        seed: Chart seed
        mask: Focus mask of input A
        sigma: Blur of the out-of-focus regions
        csv_path: CSV destination
        out_dir: Optional directory for the ground truth, pair and fused images

    Returns:
        Exit code
    """
    gt = load_ground_truth(gt_path, chart, seed)
    logger.info(f"Benchmark on {format_dims(gt.shape)} ground truth, mask={mask.kind.value}, sigma={sigma:g}")

    rows, images = bench_rows(gt, mask, sigma)

    for row in rows:
        click.echo(
            f"{row['method']}: rmse={format_metric(row['rmse'])} "
            f"rmse_gt={format_metric(row['rmse_gt'])}"
        )

    if out_dir is not None:
        directory = Path(out_dir)
        directory.mkdir(parents=True, exist_ok=True)
        for name, img in images.items():
            save_pnm(img, directory / f"{name}.pgm")
        click.echo(f"{directory}: {len(images)} images")

    write_csv(csv_path, rows, BENCH_COLUMNS)
    click.echo(f"{csv_path}: {len(rows)} rows")

    return 0
