"""
Contourlet transform: Laplacian pyramid followed by a directional filter bank

The two-channel stage of the directional filter bank is a quincunx lifting
scheme, so every stage is invertible by construction whatever the predictor.
Directional subbands are stored as rectangular rasters.
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from scipy.ndimage import correlate1d

from focusfuse.components.imgcore import Image, as_image, crop, pad_to_multiple
from focusfuse.utils.errors import ConfigError, DimensionError, StructureError


logger = logging.getLogger(__name__)


LP_KERNEL = np.array([0.05, 0.25, 0.40, 0.25, 0.05])

PREDICT_WEIGHT = 0.25
UPDATE_WEIGHT = 0.125

MAX_DFB_DEPTH = 4
MAX_PYR_LEVELS = 6

DEFAULT_PYR_LEVELS = 1
DEFAULT_DFB_DEPTHS = (3,)


@dataclass(frozen=True)
class LaplacianPyramid:
    """
    Laplacian pyramid

    Attributes:
        levels: Number of bandpass levels
        bandpass: bandpass[k] has the dims of pyramid level k (finest first)
        coarse: Lowpass residual at dims / 2^levels
        original_shape: Input dims before padding
    """
    levels: int
    bandpass: Tuple[Image, ...]
    coarse: Image
    original_shape: Tuple[int, int]


@dataclass(frozen=True)
class ContourletDecomp:
    """
    Contourlet decomposition

    Attributes:
        lowpass: Pyramid lowpass residual
        directional: Directional subbands per pyramid level, ordered coarse to
            fine; directional[i] holds 2^dfb_depths[i] subbands
        pyr_levels: Number of pyramid levels
        dfb_depths: Directional filter bank depth per level, coarse to fine
        original_shape: Input dims before padding
        padded_shape: Dims the transform actually ran on
    """
    lowpass: Image
    directional: Tuple[Tuple[Image, ...], ...]
    pyr_levels: int
    dfb_depths: Tuple[int, ...]
    original_shape: Tuple[int, int]
    padded_shape: Tuple[int, int]

    def coefficient_count(self) -> int:
        return self.lowpass.size + sum(band.size for level in self.directional for band in level)

    def level_shape(self, index: int) -> Tuple[int, int]:
        """Bandpass dims of directional[index]"""
        scale = 2 ** (self.pyr_levels - 1 - index)
        return self.padded_shape[0] // scale, self.padded_shape[1] // scale


# Laplacian pyramid

def _lp_reduce(img: Image) -> Image:
    smoothed = correlate1d(img, LP_KERNEL, axis=0, mode="reflect")
    smoothed = correlate1d(smoothed, LP_KERNEL, axis=1, mode="reflect")
    return smoothed[::2, ::2]


def _lp_expand_axis(coarse: Image, axis: int) -> Image:
    # symmetric extension of the coarse signal keeps both polyphase
    # components of a constant exact at the borders
    pad = [(0, 0), (0, 0)]
    pad[axis] = (2, 2)
    extended = np.pad(coarse, pad, mode="symmetric")

    up_shape = list(extended.shape)
    up_shape[axis] *= 2
    upsampled = np.zeros(up_shape)
    index = [slice(None), slice(None)]
    index[axis] = slice(None, None, 2)
    upsampled[tuple(index)] = extended

    filtered = correlate1d(upsampled, 2.0 * LP_KERNEL, axis=axis, mode="constant")

    index[axis] = slice(4, 4 + 2 * coarse.shape[axis])
    return filtered[tuple(index)]


def _lp_expand(coarse: Image) -> Image:
    return _lp_expand_axis(_lp_expand_axis(coarse, 0), 1)


def lp_analysis(img: Image, levels: int = DEFAULT_PYR_LEVELS) -> LaplacianPyramid:
    """
    Laplacian pyramid decomposition

    Args:
        img: Image, replicate-padded to dims divisible by 2^levels
        levels: Number of bandpass levels, >= 1

    Returns:
        Laplacian pyramid
    """
    if not 1 <= levels <= MAX_PYR_LEVELS:
        raise ConfigError(f"pyramid levels must be in 1..{MAX_PYR_LEVELS}, got {levels}")

    img = as_image(img)
    current = pad_to_multiple(img, 2 ** levels)

    bandpass = []
    for _ in range(levels):
        coarse = _lp_reduce(current)
        bandpass.append(current - _lp_expand(coarse))
        current = coarse

    return LaplacianPyramid(
        levels=levels,
        bandpass=tuple(bandpass),
        coarse=current,
        original_shape=(img.shape[0], img.shape[1]),
    )


def lp_synthesis(pyr: LaplacianPyramid) -> Image:
    """
    Reconstruct an image from its Laplacian pyramid

    Args:
        pyr: Laplacian pyramid

    Returns:
        Image cropped to the original dims
    """
    if pyr.levels < 1 or len(pyr.bandpass) != pyr.levels:
        raise StructureError(f"expected {pyr.levels} bandpass levels, got {len(pyr.bandpass)}")

    rows, cols = np.shape(pyr.bandpass[0])
    for k, band in enumerate(pyr.bandpass):
        want = (rows // 2 ** k, cols // 2 ** k)
        if np.shape(band) != want or rows % 2 ** k or cols % 2 ** k:
            raise StructureError(f"bandpass level {k} has shape {np.shape(band)}, expected {want}")

    scale = 2 ** pyr.levels
    if rows % scale or cols % scale or np.shape(pyr.coarse) != (rows // scale, cols // scale):
        raise StructureError(f"coarse band has shape {np.shape(pyr.coarse)}, expected {(rows // scale, cols // scale)}")

    current = np.asarray(pyr.coarse, dtype=np.float64)
    for band in reversed(pyr.bandpass):
        current = _lp_expand(current) + band

    return crop(current, pyr.original_shape)


# quincunx lifting stage

def _column_modulation(width: int) -> np.ndarray:
    return np.where(np.arange(width) % 2, -1.0, 1.0)


def _even_coset(shape: Tuple[int, int]) -> np.ndarray:
    rows, cols = np.indices(shape)
    return (rows + cols) % 2 == 0


def _neighbor_sum(x: np.ndarray) -> np.ndarray:
    # whole-sample symmetric extension keeps checkerboard parity
    p = np.pad(x, 1, mode="reflect")
    return p[:-2, 1:-1] + p[2:, 1:-1] + p[1:-1, :-2] + p[1:-1, 2:]


def _coset_index(shape: Tuple[int, int], parity: int) -> np.ndarray:
    rows, cols = shape
    return 2 * np.arange(cols // 2)[None, :] + (np.arange(rows)[:, None] + parity) % 2


def fan_split(band: Image) -> Tuple[Image, Image]:
    """
    Two-channel fan filter bank analysis

    Column modulation by (-1)^n followed by quincunx lifting: the odd
    checkerboard coset is predicted from its four lattice neighbours and the
    even coset is updated from the four neighbouring residuals.

    Args:
        band: Raster with even width

    Returns:
        (ch0, ch1) as H x W/2 rasters; ch0 holds the updated even coset,
        ch1 the prediction residual
    """
    band = np.asarray(band, dtype=np.float64)
    rows, cols = band.shape

    if cols % 2:
        raise DimensionError(f"fan_split needs an even width, got {cols}")
    if rows < 2 or cols < 2:
        raise DimensionError(f"fan_split needs at least 2x2 samples, got {rows}x{cols}")

    x = band * _column_modulation(cols)
    even = _even_coset(x.shape)

    residual = np.where(even, 0.0, x - PREDICT_WEIGHT * _neighbor_sum(x))
    smooth = x + UPDATE_WEIGHT * _neighbor_sum(residual)

    ch0 = np.take_along_axis(smooth, _coset_index(x.shape, 0), axis=1)
    ch1 = np.take_along_axis(residual, _coset_index(x.shape, 1), axis=1)

    return ch0, ch1


def fan_merge(ch0: Image, ch1: Image) -> Image:
    """
    Two-channel fan filter bank synthesis, the exact inverse of fan_split

    Args:
        ch0: Even-coset channel
        ch1: Residual channel

    Returns:
        Reconstructed raster of width 2 x channel width
    """
    ch0 = np.asarray(ch0, dtype=np.float64)
    ch1 = np.asarray(ch1, dtype=np.float64)

    if ch0.ndim != 2 or ch0.shape != ch1.shape:
        raise StructureError(f"fan channels differ in shape: {ch0.shape} vs {ch1.shape}")

    shape = (ch0.shape[0], 2 * ch0.shape[1])
    even = _even_coset(shape)

    residual = np.zeros(shape)
    np.put_along_axis(residual, _coset_index(shape, 1), ch1, axis=1)
    smooth = np.zeros(shape)
    np.put_along_axis(smooth, _coset_index(shape, 0), ch0, axis=1)

    x_even = np.where(even, smooth - UPDATE_WEIGHT * _neighbor_sum(residual), 0.0)
    x = np.where(even, x_even, residual + PREDICT_WEIGHT * _neighbor_sum(x_even))

    return x * _column_modulation(shape[1])


# directional filter bank

def _shear(x: Image, axis: int, sign: int) -> Image:
    """Circular integer shear: shift line n along axis by sign * n"""
    rows, cols = x.shape
    if axis == 0:
        index = (np.arange(rows)[:, None] + sign * np.arange(cols)[None, :]) % rows
    else:
        index = (np.arange(cols)[None, :] + sign * np.arange(rows)[:, None]) % cols
    return np.take_along_axis(x, index, axis=axis)


def _split(x: Image, axis: int) -> Tuple[Image, Image]:
    if axis == 1:
        return fan_split(x)
    c0, c1 = fan_split(x.T)
    return np.ascontiguousarray(c0.T), np.ascontiguousarray(c1.T)


def _merge(c0: Image, c1: Image, axis: int) -> Image:
    if axis == 1:
        return fan_merge(c0, c1)
    return np.ascontiguousarray(fan_merge(np.asarray(c0).T, np.asarray(c1).T).T)


def _node_resampling(depth: int, index: int, count: int) -> Tuple[int, int]:
    # the first half of the tree keeps splitting rows, the second half columns
    axis = 0 if depth == 2 or index < count // 2 else 1
    sign = 1 if index % 2 == 0 else -1
    return axis, sign


def dfb_leaf_shapes(shape: Tuple[int, int], depth: int) -> List[Tuple[int, int]]:
    """
    Subband shapes produced by dfb_analysis

    Args:
        shape: (H, W) of the analysed band
        depth: Tree depth l

    Returns:
        2^l shapes in subband order
    """
    rows, cols = shape
    if depth == 0:
        return [(rows, cols)]
    if depth == 1:
        return [(rows, cols // 2)] * 2
    half = 2 ** (depth - 1)
    return [(rows // half, cols // 2)] * half + [(rows // 2, cols // half)] * half


def _check_depth(depth: int) -> None:
    if not 0 <= depth <= MAX_DFB_DEPTH:
        raise ConfigError(f"DFB depth must be in 0..{MAX_DFB_DEPTH}, got {depth}")


def dfb_analysis(band: Image, depth: int) -> List[Image]:
    """
    Directional filter bank decomposition

    A binary tree of fan_split stages. From depth 2 on, each node is
    resampled by one of four integer shears before its two-channel split.

    Args:
        band: Raster with dims divisible by 2^depth
        depth: Tree depth l, 0..4

    Returns:
        2^l directional subbands
    """
    _check_depth(depth)
    band = np.asarray(band, dtype=np.float64)
    rows, cols = band.shape
    scale = 2 ** depth

    if rows % scale or cols % scale:
        raise DimensionError(f"band {rows}x{cols} not divisible by {scale} for DFB depth {depth}")

    if depth == 0:
        return [band.copy()]

    nodes = list(fan_split(band))
    for level in range(2, depth + 1):
        children = []
        for i, node in enumerate(nodes):
            axis, sign = _node_resampling(level, i, len(nodes))
            children.extend(_split(_shear(node, axis, sign), axis))
        nodes = children

    return nodes


def dfb_synthesis(subbands: Sequence[Image]) -> Image:
    """
    Inverse directional filter bank

    Args:
        subbands: 2^l subbands as produced by dfb_analysis

    Returns:
        Reconstructed band
    """
    count = len(subbands)
    if count < 1 or count & (count - 1):
        raise StructureError(f"subband count must be a power of two, got {count}")

    depth = count.bit_length() - 1
    _check_depth(depth)
    nodes = [np.asarray(s, dtype=np.float64) for s in subbands]

    if depth == 0:
        return nodes[0].copy()

    first_rows, first_cols = nodes[0].shape
    if depth == 1:
        shape = (first_rows, 2 * first_cols)
    else:
        shape = (first_rows * 2 ** (depth - 1), first_cols * 2)

    for i, (node, want) in enumerate(zip(nodes, dfb_leaf_shapes(shape, depth))):
        if node.shape != want:
            raise StructureError(f"subband {i} has shape {node.shape}, expected {want}")

    for level in range(depth, 1, -1):
        parents = []
        for i in range(len(nodes) // 2):
            axis, sign = _node_resampling(level, i, len(nodes) // 2)
            merged = _merge(nodes[2 * i], nodes[2 * i + 1], axis)
            parents.append(_shear(merged, axis, -sign))
        nodes = parents

    return fan_merge(nodes[0], nodes[1])


# contourlet

def _validate_config(pyr_levels: int, dfb_depths: Sequence[int]) -> None:
    if not 1 <= pyr_levels <= MAX_PYR_LEVELS:
        raise ConfigError(f"pyramid levels must be in 1..{MAX_PYR_LEVELS}, got {pyr_levels}")
    if len(dfb_depths) != pyr_levels:
        raise ConfigError(f"need one DFB depth per pyramid level: {pyr_levels} levels, {len(dfb_depths)} depths")
    for depth in dfb_depths:
        _check_depth(depth)


def ct_forward(img: Image, pyr_levels: int = DEFAULT_PYR_LEVELS, dfb_depths: Sequence[int] = DEFAULT_DFB_DEPTHS) -> ContourletDecomp:
    """
    Forward contourlet transform

    The input is replicate-padded once to a multiple of
    2^(pyr_levels + max depth), decomposed by the Laplacian pyramid, and each
    bandpass level is split by the directional filter bank.

    Args:
        img: Image
        pyr_levels: Pyramid levels
        dfb_depths: DFB depth per level, ordered coarse to fine

    Returns:
        Contourlet decomposition
    """
    dfb_depths = tuple(int(d) for d in dfb_depths)
    _validate_config(pyr_levels, dfb_depths)

    img = as_image(img)
    padded = pad_to_multiple(img, 2 ** (pyr_levels + max(dfb_depths)))

    pyr = lp_analysis(padded, pyr_levels)

    directional = tuple(
        tuple(dfb_analysis(pyr.bandpass[pyr_levels - 1 - i], depth))
        for i, depth in enumerate(dfb_depths)
    )

    logger.debug(
        f"ct_forward {img.shape} -> padded {padded.shape}, "
        f"{pyr_levels} level(s), depths {list(dfb_depths)}"
    )

    return ContourletDecomp(
        lowpass=pyr.coarse,
        directional=directional,
        pyr_levels=pyr_levels,
        dfb_depths=dfb_depths,
        original_shape=(img.shape[0], img.shape[1]),
        padded_shape=(padded.shape[0], padded.shape[1]),
    )


def ct_inverse(d: ContourletDecomp) -> Image:
    """
    Inverse contourlet transform

    Args:
        d: Contourlet decomposition

    Returns:
        Image cropped to the original dims
    """
    _validate_config(d.pyr_levels, d.dfb_depths)

    if len(d.directional) != d.pyr_levels:
        raise StructureError(f"expected {d.pyr_levels} directional levels, got {len(d.directional)}")

    scale = 2 ** d.pyr_levels
    rows, cols = d.padded_shape
    if np.shape(d.lowpass) != (rows // scale, cols // scale):
        raise StructureError(f"lowpass has shape {np.shape(d.lowpass)}, expected {(rows // scale, cols // scale)}")

    bandpass = [None] * d.pyr_levels
    for i, (level, depth) in enumerate(zip(d.directional, d.dfb_depths)):
        if len(level) != 2 ** depth:
            raise StructureError(f"level {i} has {len(level)} subbands, expected {2 ** depth}")
        shape = d.level_shape(i)
        if [np.shape(s) for s in level] != dfb_leaf_shapes(shape, depth):
            raise StructureError(f"level {i} subband shapes do not match a {shape[0]}x{shape[1]} band")
        bandpass[d.pyr_levels - 1 - i] = dfb_synthesis(level)

    pyr = LaplacianPyramid(
        levels=d.pyr_levels,
        bandpass=tuple(bandpass),
        coarse=np.asarray(d.lowpass, dtype=np.float64),
        original_shape=d.padded_shape,
    )

    return crop(lp_synthesis(pyr), d.original_shape)


def subband_energies(d: ContourletDecomp) -> List[List[float]]:
    """
    Sum of squared coefficients of every directional subband

    Args:
        d: Contourlet decomposition

    Returns:
        Energies per level (coarse to fine), per subband
    """
    return [[float(np.sum(np.square(s))) for s in level] for level in d.directional]
