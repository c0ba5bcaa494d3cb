"""
Spatial frequency activity measure and RMSE fusion evaluation
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np

from focusfuse.components.imgcore import Image, as_image, require_same_shape
from focusfuse.utils.errors import DimensionError


@dataclass(frozen=True)
class SfValue:
    """Row frequency, column frequency and spatial frequency of a block"""
    rf: float
    cf: float
    sf: float


@dataclass(frozen=True)
class MetricsReport:
    """
    Fusion error report

    Attributes:
        rmse1: RMSE between input A and the fused image
        rmse2: RMSE between input B and the fused image
        rmse: Mean of rmse1 and rmse2
        rmse_gt: RMSE between ground truth and the fused image, if known
        sf_a: Whole-image spatial frequency of A
        sf_b: Whole-image spatial frequency of B
        sf_f: Whole-image spatial frequency of the fused image
    """
    rmse1: float
    rmse2: float
    rmse: float
    rmse_gt: Optional[float] = None
    sf_a: Optional[SfValue] = None
    sf_b: Optional[SfValue] = None
    sf_f: Optional[SfValue] = None

    def to_row(self) -> Dict[str, Any]:
        """Flatten into a CSV row"""
        return {
            "rmse1": self.rmse1,
            "rmse2": self.rmse2,
            "rmse": self.rmse,
            "rmse_gt": self.rmse_gt,
            "sf_a": self.sf_a.sf if self.sf_a else None,
            "sf_b": self.sf_b.sf if self.sf_b else None,
            "sf_f": self.sf_f.sf if self.sf_f else None,
        }


def spatial_frequency(block: Image) -> SfValue:
    """
    Spatial frequency of a block

    Differences are taken between valid neighbours only, so the first row
    and column contribute no terms, while the divisor stays M * N.

    Args:
        block: M x N raster, M, N >= 1

    Returns:
        RF, CF and SF = sqrt(RF^2 + CF^2)
    """
    block = np.asarray(block, dtype=np.float64)

    if block.ndim != 2 or block.size == 0:
        raise DimensionError(f"spatial frequency needs a non-empty 2-D block, got shape {block.shape}")

    count = block.size
    rf = math.sqrt(float(np.sum(np.square(np.diff(block, axis=1)))) / count)
    cf = math.sqrt(float(np.sum(np.square(np.diff(block, axis=0)))) / count)

    return SfValue(rf=rf, cf=cf, sf=math.sqrt(rf * rf + cf * cf))


def rmse_pair(x: Image, y: Image) -> float:
    """
    Root mean squared difference over all pixels

    Args:
        x: Image
        y: Image of the same dims

    Returns:
        RMSE
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    require_same_shape(x, y)

    return math.sqrt(float(np.mean(np.square(x - y))))


def fusion_rmse(a: Image, b: Image, f: Image, ground_truth: Optional[Image] = None) -> MetricsReport:
    """
    Evaluate a fused image against both inputs

    Args:
        a: Input A
        b: Input B
        f: Fused image
        ground_truth: Optional all-in-focus reference

    Returns:
        Metrics report; rmse = (rmse1 + rmse2) / 2
    """
    a, b, f = as_image(a, "input A"), as_image(b, "input B"), as_image(f, "fused image")
    require_same_shape(a, b, f)

    rmse1 = rmse_pair(a, f)
    rmse2 = rmse_pair(b, f)

    rmse_gt = None
    if ground_truth is not None:
        gt = as_image(ground_truth, "ground truth")
        require_same_shape(gt, f)
        rmse_gt = rmse_pair(gt, f)

    return MetricsReport(
        rmse1=rmse1,
        rmse2=rmse2,
        rmse=(rmse1 + rmse2) / 2,
        rmse_gt=rmse_gt,
        sf_a=spatial_frequency(a),
        sf_b=spatial_frequency(b),
        sf_f=spatial_frequency(f),
    )
