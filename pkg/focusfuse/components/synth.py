"""
Synthetic ground truth charts and multifocus input pairs
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

import numpy as np
from scipy.ndimage import correlate1d

from focusfuse.components.imgcore import Image, as_image
from focusfuse.utils.errors import ConfigError


logger = logging.getLogger(__name__)


MIN_CHART_SIZE = 64

CHECKER_CELLS = (2, 4, 8)
GRATING_PERIOD = 6.0
RECTANGLE_COUNT = 12


class MaskKind(str, Enum):
    VERTICAL_HALF = "vhalf"
    HORIZONTAL_HALF = "hhalf"
    DISK = "disk"


@dataclass(frozen=True)
class FocusMask:
    """
    Hard mask marking where input A is in focus

    Attributes:
        kind: Mask shape
        center: Disk centre as (row, col) fractions of the image dims
        radius: Disk radius as a fraction of the smaller image dim
    """
    kind: MaskKind = MaskKind.VERTICAL_HALF
    center: Tuple[float, float] = (0.5, 0.5)
    radius: float = 0.25

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", MaskKind(self.kind))
        except ValueError:
            valid = ", ".join(k.value for k in MaskKind)
            raise ConfigError(f"unknown mask kind {self.kind!r}; choose from {valid}")

    def evaluate(self, shape: Tuple[int, int]) -> np.ndarray:
        """
        Rasterize the mask

        Args:
            shape: (H, W)

        Returns:
            Boolean array, True where A is sharp
        """
        height, width = shape
        rows, cols = np.indices(shape)

        if self.kind == MaskKind.VERTICAL_HALF:
            return cols < width // 2
        if self.kind == MaskKind.HORIZONTAL_HALF:
            return rows < height // 2

        cy, cx = self.center[0] * height, self.center[1] * width
        r = self.radius * min(height, width)
        return (rows - cy) ** 2 + (cols - cx) ** 2 <= r * r


def gaussian_kernel(sigma: float) -> np.ndarray:
    """Normalized 1-D Gaussian truncated at radius ceil(3 sigma)"""
    radius = math.ceil(3 * sigma)
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    kernel = np.exp(-(x * x) / (2 * sigma * sigma))
    return kernel / kernel.sum()


def gaussian_blur(img: Image, sigma: float) -> Image:
    """
    Separable Gaussian blur with symmetric boundary extension

    Args:
        img: Image
        sigma: Standard deviation in pixels, >= 0; 0 returns a copy

    Returns:
        Blurred image
    """
    if sigma < 0:
        raise ConfigError(f"sigma must be >= 0, got {sigma}")

    img = as_image(img)
    if sigma == 0:
        return img.copy()

    kernel = gaussian_kernel(sigma)
    blurred = correlate1d(img, kernel, axis=0, mode="reflect")

    return correlate1d(blurred, kernel, axis=1, mode="reflect")


def make_pair(gt: Image, mask: FocusMask, sigma: float) -> Tuple[Image, Image]:
    """
    Build a multifocus pair from a sharp ground truth

    A is sharp where the mask is set and blurred elsewhere; B is the
    complement.

    Args:
        gt: All-in-focus ground truth
        mask: Focus mask for A
        sigma: Blur strength of the out-of-focus regions

    Returns:
        (A, B)
    """
    gt = as_image(gt, "ground truth")
    blurred = gaussian_blur(gt, sigma)
    sharp_a = mask.evaluate(gt.shape)

    a = np.where(sharp_a, gt, blurred)
    b = np.where(sharp_a, blurred, gt)

    logger.debug(f"Synthetic pair {gt.shape[0]}x{gt.shape[1]}, mask={mask.kind.value}, sigma={sigma}")

    return a, b


def _grating(rows: np.ndarray, cols: np.ndarray, degrees: float) -> np.ndarray:
    theta = math.radians(degrees)
    phase = 2 * math.pi * (cols * math.cos(theta) + rows * math.sin(theta)) / GRATING_PERIOD
    return 127.5 + 100.0 * np.cos(phase)


def test_chart(height: int, width: int, seed: int) -> Image:
    """
    Deterministic test chart

    Top-left quadrant holds checkerboards at several scales, top-right the
    0 and 90 degree gratings, bottom-left the 45 and 135 degree gratings,
    bottom-right seeded random rectangles.

    Args:
        height: Rows, >= 64
        width: Cols, >= 64
        seed: Random seed for the rectangles

    Returns:
        Chart with samples in [0, 255]
    """
    if height < MIN_CHART_SIZE or width < MIN_CHART_SIZE:
        raise ConfigError(f"chart must be at least {MIN_CHART_SIZE}x{MIN_CHART_SIZE}, got {height}x{width}")

    rng = np.random.default_rng(seed)
    rows, cols = np.indices((height, width), dtype=np.float64)
    chart = np.full((height, width), 128.0)

    hh, hw = height // 2, width // 2

    for i, cell in enumerate(CHECKER_CELLS):
        rs = slice(i * hh // len(CHECKER_CELLS), (i + 1) * hh // len(CHECKER_CELLS))
        board = (rows[rs, :hw] // cell + cols[rs, :hw] // cell) % 2
        chart[rs, :hw] = 40.0 + 175.0 * board

    chart[:hh // 2, hw:] = _grating(rows[:hh // 2, hw:], cols[:hh // 2, hw:], 0)
    chart[hh // 2:hh, hw:] = _grating(rows[hh // 2:hh, hw:], cols[hh // 2:hh, hw:], 90)
    chart[hh:, :hw // 2] = _grating(rows[hh:, :hw // 2], cols[hh:, :hw // 2], 45)
    chart[hh:, hw // 2:hw] = _grating(rows[hh:, hw // 2:hw], cols[hh:, hw // 2:hw], 135)

    region = chart[hh:, hw:]
    region[:] = 90.0
    rh, rw = region.shape
    for _ in range(RECTANGLE_COUNT):
        h = int(rng.integers(4, max(5, rh // 2)))
        w = int(rng.integers(4, max(5, rw // 2)))
        top = int(rng.integers(0, rh - h + 1))
        left = int(rng.integers(0, rw - w + 1))
        region[top:top + h, left:left + w] = float(rng.integers(0, 256))

    return np.clip(chart, 0.0, 255.0)


# keep pytest from collecting the chart generator when tests import it by name
test_chart.__test__ = False
