"""
Two-dimensional discrete wavelet transform with periodic extension
"""

import logging
from dataclasses import dataclass
from typing import NamedTuple, Tuple

import numpy as np
import pywt

from focusfuse.components.imgcore import Image, as_image, crop, pad_to_multiple
from focusfuse.utils.errors import ConfigError, StructureError


logger = logging.getLogger(__name__)


# filter id -> PyWavelets name; db2 is the 4-tap Daubechies filter
WAVELET_FILTERS = {
    "haar": "haar",
    "db2": "db2",
}

DEFAULT_FILTER = "haar"
DEFAULT_LEVELS = 1
MAX_WAVELET_LEVELS = 8

_MODE = "periodization"


class DetailBands(NamedTuple):
    """Detail subbands of one level; horizontal = lowpass rows, highpass columns"""
    horizontal: Image
    vertical: Image
    diagonal: Image


@dataclass(frozen=True)
class WaveletDecomp:
    """
    Multi-level wavelet decomposition

    Attributes:
        levels: Number of levels
        approx: Coarsest approximation (LL) subband
        details: Detail triples, details[k] belongs to level k + 1 (finest first)
        original_shape: Input dims before padding
        padded_shape: Dims the transform actually ran on
        wavelet: Wavelet filter id
    """
    levels: int
    approx: Image
    details: Tuple[DetailBands, ...]
    original_shape: Tuple[int, int]
    padded_shape: Tuple[int, int]
    wavelet: str = DEFAULT_FILTER

    def coefficient_count(self) -> int:
        return self.approx.size + sum(band.size for level in self.details for band in level)


def _resolve_filter(filter_id: str) -> str:
    try:
        return WAVELET_FILTERS[filter_id]
    except KeyError:
        raise ConfigError(f"unknown wavelet filter {filter_id!r}; choose from {sorted(WAVELET_FILTERS)}")


def dwt2(img: Image, levels: int = DEFAULT_LEVELS, wavelet: str = DEFAULT_FILTER) -> WaveletDecomp:
    """
    Forward 2-D DWT

    The input is replicate-padded to dims divisible by 2^levels. Filters are
    orthonormal, so a constant image c maps to an LL value of 2^levels * c.

    Args:
        img: Image
        levels: Decomposition depth, >= 1
        wavelet: Wavelet filter id ("haar" or "db2")

    Returns:
        Wavelet decomposition
    """
    pywt_name = _resolve_filter(wavelet)

    if not 1 <= levels <= MAX_WAVELET_LEVELS:
        raise ConfigError(f"wavelet levels must be in 1..{MAX_WAVELET_LEVELS}, got {levels}")

    img = as_image(img)
    padded = pad_to_multiple(img, 2 ** levels)

    coeffs = pywt.wavedec2(padded, pywt_name, mode=_MODE, level=levels)

    # pywt orders detail levels coarsest first
    details = tuple(DetailBands(*level) for level in reversed(coeffs[1:]))

    logger.debug(f"dwt2 {img.shape} -> padded {padded.shape}, {levels} level(s), {wavelet}")

    return WaveletDecomp(
        levels=levels,
        approx=coeffs[0],
        details=details,
        original_shape=(img.shape[0], img.shape[1]),
        padded_shape=(padded.shape[0], padded.shape[1]),
        wavelet=wavelet,
    )


def _check_structure(d: WaveletDecomp) -> None:
    rows, cols = d.padded_shape

    if d.levels < 1 or len(d.details) != d.levels:
        raise StructureError(f"expected {d.levels} detail levels, got {len(d.details)}")

    scale = 2 ** d.levels
    if rows % scale or cols % scale:
        raise StructureError(f"padded dims {rows}x{cols} not divisible by {scale}")

    if np.shape(d.approx) != (rows // scale, cols // scale):
        raise StructureError(f"approximation has shape {np.shape(d.approx)}, expected {(rows // scale, cols // scale)}")

    for k, level in enumerate(d.details, start=1):
        want = (rows // 2 ** k, cols // 2 ** k)
        for name, band in zip(DetailBands._fields, level):
            if np.shape(band) != want:
                raise StructureError(f"level {k} {name} detail has shape {np.shape(band)}, expected {want}")


def idwt2(d: WaveletDecomp) -> Image:
    """
    Inverse 2-D DWT

    Args:
        d: Wavelet decomposition

    Returns:
        Reconstructed image cropped to the original dims
    """
    pywt_name = _resolve_filter(d.wavelet)
    _check_structure(d)

    coeffs = [np.asarray(d.approx, dtype=np.float64)]
    coeffs.extend(tuple(np.asarray(b, dtype=np.float64) for b in level) for level in reversed(d.details))

    recon = pywt.waverec2(coeffs, pywt_name, mode=_MODE)

    return crop(recon, d.original_shape)
