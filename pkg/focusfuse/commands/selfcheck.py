"""
selfcheck command - verify transform reconstruction and the SF measure
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Tuple

import click
import numpy as np

from focusfuse.components.contourlet import (
    ct_forward,
    ct_inverse,
    dfb_analysis,
    dfb_synthesis,
    lp_analysis,
    lp_synthesis,
    subband_energies,
)
from focusfuse.components.imgcore import Image, pad_to_multiple
from focusfuse.components.metrics import spatial_frequency
from focusfuse.components.wavelet import dwt2, idwt2


logger = logging.getLogger(__name__)


DEFAULT_SIZE = (128, 128)
DEFAULT_TRIALS = 1000

PR_TOLERANCE = 1e-9
LP_TOLERANCE = 1e-12
SF_TOLERANCE = 1e-12

SF_BLOCK = (8, 8)

CONTOURLET_CONFIGS = (
    (1, (3,)),
    (2, (2, 3)),
)

FAILED_EXIT_CODE = 3


@dataclass(frozen=True)
class CheckResult:
    name: str
    error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.error <= self.tolerance


def _max_error(x: Image, y: Image) -> float:
    return float(np.max(np.abs(np.asarray(x) - np.asarray(y))))


def brute_force_sf(block: Image) -> float:
    """Spatial frequency evaluated term by term, independent of the vectorized version"""
    rows, cols = block.shape
    rf = 0.0
    cf = 0.0
    for i in range(rows):
        for j in range(cols):
            if j > 0:
                rf += (block[i, j] - block[i, j - 1]) ** 2
            if i > 0:
                cf += (block[i, j] - block[i - 1, j]) ** 2
    return math.sqrt(rf / (rows * cols) + cf / (rows * cols))


def _reconstruction_checks(img: Image) -> List[CheckResult]:
    results = []

    for levels in (1, 2, 3):
        recon = idwt2(dwt2(img, levels))
        results.append(CheckResult(f"dwt haar L{levels} reconstruction", _max_error(img, recon), PR_TOLERANCE))

    recon = lp_synthesis(lp_analysis(img, 2))
    results.append(CheckResult("laplacian pyramid reconstruction", _max_error(img, recon), LP_TOLERANCE))

    band = pad_to_multiple(img, 8)
    for depth in (1, 2, 3):
        recon = dfb_synthesis(dfb_analysis(band, depth))
        results.append(CheckResult(f"dfb l={depth} reconstruction", _max_error(band, recon), PR_TOLERANCE))

    for pyr_levels, depths in CONTOURLET_CONFIGS:
        recon = ct_inverse(ct_forward(img, pyr_levels, depths))
        name = f"contourlet ({pyr_levels},{list(depths)}) reconstruction"
        results.append(CheckResult(name, _max_error(img, recon), PR_TOLERANCE))

    return results


def _sampling_checks(img: Image) -> List[CheckResult]:
    results = []

    for pyr_levels, depths in CONTOURLET_CONFIGS:
        d = ct_forward(img, pyr_levels, depths)

        # each DFB stage is critically sampled; the pyramid itself is not
        mismatch = 0
        pyramid_count = d.lowpass.size
        for i, level in enumerate(d.directional):
            rows, cols = d.level_shape(i)
            pyramid_count += rows * cols
            mismatch += abs(sum(band.size for band in level) - rows * cols)
        mismatch += abs(d.coefficient_count() - pyramid_count)

        logger.info(
            f"contourlet ({pyr_levels},{list(depths)}): {d.coefficient_count()} coefficients "
            f"for {d.padded_shape[0] * d.padded_shape[1]} padded pixels"
        )
        results.append(CheckResult(f"contourlet ({pyr_levels},{list(depths)}) critical sampling", float(mismatch), 0.0))

    return results


def _sf_oracle_check(rng: np.random.Generator, trials: int) -> CheckResult:
    worst = 0.0
    for _ in range(trials):
        block = rng.uniform(0.0, 255.0, SF_BLOCK)
        worst = max(worst, abs(spatial_frequency(block).sf - brute_force_sf(block)))
    return CheckResult(f"sf oracle ({trials} blocks)", worst, SF_TOLERANCE)


def grating_diagnostic(size: Tuple[int, int], period: float = 6.0) -> Tuple[int, float]:
    """
    Which depth-3 directional subband dominates for a 45 degree grating

    Args:
        size: (H, W) of the grating
        period: Grating period in pixels

    Returns:
        (index of the dominant subband, its share of the directional energy)
    """
    rows, cols = np.indices(size, dtype=np.float64)
    grating = 127.5 + 100.0 * np.cos(2 * math.pi * (rows + cols) / (period * math.sqrt(2)))

    energies = subband_energies(ct_forward(grating, 1, (3,)))[0]
    dominant = int(np.argmax(energies))

    return dominant, energies[dominant] / sum(energies)


def run_selfcheck_command(size: Tuple[int, int] = DEFAULT_SIZE, trials: int = DEFAULT_TRIALS, seed: int = 0) -> int:
    """
    Run every self check and print PASS/FAIL per check

    Args:
        size: (H, W) of the random test image
        trials: Number of random blocks for the SF oracle
        seed: Random seed

    Returns:
        0 when every check passes
    """
    rng = np.random.default_rng(seed)
    img = rng.uniform(0.0, 255.0, size)

    results = _reconstruction_checks(img) + _sampling_checks(img) + [_sf_oracle_check(rng, trials)]

    for result in results:
        status = "PASS" if result.passed else "FAIL"
        click.echo(f"{status} {result.name} (max error {result.error:.3g}, tolerance {result.tolerance:g})")

    dominant, share = grating_diagnostic(size)
    logger.info(f"45 degree grating: subband {dominant} of 8 holds {share:.1%} of the directional energy")

    failed = sum(not result.passed for result in results)
    if failed:
        logger.error(f"{failed} of {len(results)} checks failed")
        return FAILED_EXIT_CODE

    return 0
