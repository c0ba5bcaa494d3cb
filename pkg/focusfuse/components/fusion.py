"""
Multifocus fusion methods behind one dispatcher

Four methods: wavelet maximum selection, spatial frequency block selection,
and spatial frequency selection inside wavelet or contourlet subbands.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum, IntEnum
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from focusfuse.components.contourlet import DEFAULT_DFB_DEPTHS, DEFAULT_PYR_LEVELS, MAX_PYR_LEVELS, ct_forward, ct_inverse
from focusfuse.components.imgcore import (
    BlockGrid,
    Image,
    as_image,
    assemble_blocks,
    block_slices,
    partition_blocks,
    require_same_shape,
)
from focusfuse.components.metrics import spatial_frequency
from focusfuse.components.wavelet import (
    DEFAULT_FILTER,
    DEFAULT_LEVELS,
    MAX_WAVELET_LEVELS,
    WAVELET_FILTERS,
    DetailBands,
    dwt2,
    idwt2,
)
from focusfuse.utils.errors import ConfigError
from focusfuse.utils.settings import get_max_workers


logger = logging.getLogger(__name__)


class FusionMethod(str, Enum):
    WAVELET_MAX = "wavelet"
    SPATIAL_SF = "sf"
    WAVELET_SF = "wavelet-sf"
    CONTOURLET_SF = "contourlet-sf"


class Granularity(str, Enum):
    BLOCK = "block"
    SUBBAND = "subband"


class SelectionChoice(IntEnum):
    TAKE_A = 0
    TAKE_B = 1
    AVERAGE = 2


DEFAULT_THRESHOLD = 1.75
DEFAULT_BLOCK = 8


def _coerce(enum_type, value, label: str):
    try:
        return enum_type(value)
    except ValueError:
        valid = ", ".join(member.value for member in enum_type)
        raise ConfigError(f"unknown {label} {value!r}; choose from {valid}")


@dataclass(frozen=True)
class FusionConfig:
    """
    Fusion parameters

    Attributes:
        method: Fusion method
        block_rows: Block height M for SF selection
        block_cols: Block width N for SF selection
        threshold: Dead-zone TH between take-A and take-B decisions
        wavelet_levels: DWT depth
        wavelet_filter: DWT filter id
        pyr_levels: Laplacian pyramid depth
        dfb_depths: Directional filter bank depth per pyramid level, coarse to fine
        granularity: SF decision per block or per whole subband
    """
    method: FusionMethod = FusionMethod.CONTOURLET_SF
    block_rows: int = DEFAULT_BLOCK
    block_cols: int = DEFAULT_BLOCK
    threshold: float = DEFAULT_THRESHOLD
    wavelet_levels: int = DEFAULT_LEVELS
    wavelet_filter: str = DEFAULT_FILTER
    pyr_levels: int = DEFAULT_PYR_LEVELS
    dfb_depths: Tuple[int, ...] = DEFAULT_DFB_DEPTHS
    granularity: Granularity = Granularity.BLOCK

    def __post_init__(self):
        object.__setattr__(self, "method", _coerce(FusionMethod, self.method, "fusion method"))
        object.__setattr__(self, "granularity", _coerce(Granularity, self.granularity, "granularity"))
        object.__setattr__(self, "dfb_depths", tuple(int(d) for d in self.dfb_depths))
        self.validate()

    def validate(self) -> None:
        """Raise ConfigError if any parameter is out of range"""
        if self.block_rows < 1 or self.block_cols < 1:
            raise ConfigError(f"block dims must be >= 1, got {self.block_rows}x{self.block_cols}")
        if not self.threshold >= 0:
            raise ConfigError(f"threshold must be >= 0, got {self.threshold}")
        if not 1 <= self.wavelet_levels <= MAX_WAVELET_LEVELS:
            raise ConfigError(f"wavelet levels must be in 1..{MAX_WAVELET_LEVELS}, got {self.wavelet_levels}")
        if self.wavelet_filter not in WAVELET_FILTERS:
            raise ConfigError(f"unknown wavelet filter {self.wavelet_filter!r}; choose from {sorted(WAVELET_FILTERS)}")
        if not 1 <= self.pyr_levels <= MAX_PYR_LEVELS:
            raise ConfigError(f"pyramid levels must be in 1..{MAX_PYR_LEVELS}, got {self.pyr_levels}")
        if len(self.dfb_depths) != self.pyr_levels:
            raise ConfigError(f"need one DFB depth per pyramid level: {self.pyr_levels} levels, {len(self.dfb_depths)} depths")


@dataclass(frozen=True)
class FusionResult:
    """
    Fused image with the selection decisions that produced it

    Attributes:
        image: Fused image, before quantization
        decisions: Subband label -> array of SelectionChoice codes, one per
            block, one per subband (1x1), or one per coefficient for the
            wavelet maximum rule
    """
    image: Image
    decisions: Dict[str, np.ndarray] = field(default_factory=dict)


def select_by_sf(sf_a: float, sf_b: float, th: float) -> SelectionChoice:
    """
    Three-way selection with a dead zone

    Args:
        sf_a: Activity of A
        sf_b: Activity of B
        th: Threshold, >= 0

    Returns:
        TAKE_A if sf_a > sf_b + th, TAKE_B if sf_a < sf_b - th, else AVERAGE
    """
    if th < 0:
        raise ConfigError(f"threshold must be >= 0, got {th}")

    if sf_a > sf_b + th:
        return SelectionChoice.TAKE_A
    if sf_a < sf_b - th:
        return SelectionChoice.TAKE_B
    return SelectionChoice.AVERAGE


def _pick(choice: SelectionChoice, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if choice == SelectionChoice.TAKE_A:
        return a.copy()
    if choice == SelectionChoice.TAKE_B:
        return b.copy()
    return (a + b) / 2


def _select_band(a: np.ndarray, b: np.ndarray, cfg: FusionConfig) -> Tuple[np.ndarray, np.ndarray]:
    """SF selection inside one subband at the configured granularity"""
    if cfg.granularity == Granularity.SUBBAND:
        choice = select_by_sf(spatial_frequency(a).sf, spatial_frequency(b).sf, cfg.threshold)
        return _pick(choice, a, b), np.array([[int(choice)]])

    rows = -(-a.shape[0] // cfg.block_rows)
    cols = -(-a.shape[1] // cfg.block_cols)
    decisions = np.empty((rows, cols), dtype=np.int8)
    fused = np.empty_like(a)

    for r, c, rs, cs in block_slices(a.shape, cfg.block_rows, cfg.block_cols):
        choice = select_by_sf(spatial_frequency(a[rs, cs]).sf, spatial_frequency(b[rs, cs]).sf, cfg.threshold)
        fused[rs, cs] = _pick(choice, a[rs, cs], b[rs, cs])
        decisions[r, c] = choice

    return fused, decisions


def _select_bands(pairs: Sequence[Tuple[np.ndarray, np.ndarray]], cfg: FusionConfig) -> List[Tuple[np.ndarray, np.ndarray]]:
    # results come back in submission order
    if len(pairs) < 2:
        return [_select_band(a, b, cfg) for a, b in pairs]

    with ThreadPoolExecutor(max_workers=get_max_workers()) as pool:
        return list(pool.map(lambda pair: _select_band(pair[0], pair[1], cfg), pairs))


def _prepare(a: Image, b: Image) -> Tuple[Image, Image]:
    a = as_image(a, "input A")
    b = as_image(b, "input B")
    require_same_shape(a, b)
    return a, b


def _wavelet_max(a: Image, b: Image, cfg: FusionConfig) -> FusionResult:
    da = dwt2(a, cfg.wavelet_levels, cfg.wavelet_filter)
    db = dwt2(b, cfg.wavelet_levels, cfg.wavelet_filter)

    decisions = {}
    details = []
    for k, (level_a, level_b) in enumerate(zip(da.details, db.details), start=1):
        merged = []
        for name, band_a, band_b in zip(DetailBands._fields, level_a, level_b):
            take_a = np.abs(band_a) > np.abs(band_b)
            merged.append(np.where(take_a, band_a, band_b))
            decisions[f"level{k}-{name}"] = np.where(take_a, int(SelectionChoice.TAKE_A), int(SelectionChoice.TAKE_B)).astype(np.int8)
        details.append(DetailBands(*merged))

    fused = idwt2(
        replace(da, approx=(da.approx + db.approx) / 2, details=tuple(details))
    )

    return FusionResult(image=fused, decisions=decisions)


def _spatial_sf(a: Image, b: Image, cfg: FusionConfig) -> FusionResult:
    grid_a = partition_blocks(a, cfg.block_rows, cfg.block_cols)
    grid_b = partition_blocks(b, cfg.block_rows, cfg.block_cols)

    rows, cols = grid_a.grid_shape
    decisions = np.empty((rows, cols), dtype=np.int8)
    fused_rows = []

    for r in range(rows):
        fused_row = []
        for c in range(cols):
            block_a, block_b = grid_a.blocks[r][c], grid_b.blocks[r][c]
            choice = select_by_sf(spatial_frequency(block_a).sf, spatial_frequency(block_b).sf, cfg.threshold)
            fused_row.append(_pick(choice, block_a, block_b))
            decisions[r, c] = choice
        fused_rows.append(tuple(fused_row))

    fused = assemble_blocks(BlockGrid(grid_a.source_shape, grid_a.block_shape, tuple(fused_rows)))

    return FusionResult(image=fused, decisions={"image": decisions})


def _wavelet_sf(a: Image, b: Image, cfg: FusionConfig) -> FusionResult:
    da = dwt2(a, cfg.wavelet_levels, cfg.wavelet_filter)
    db = dwt2(b, cfg.wavelet_levels, cfg.wavelet_filter)

    labels = []
    pairs = []
    for k, (level_a, level_b) in enumerate(zip(da.details, db.details), start=1):
        for name, band_a, band_b in zip(DetailBands._fields, level_a, level_b):
            labels.append(f"level{k}-{name}")
            pairs.append((band_a, band_b))

    selected = _select_bands(pairs, cfg)

    bands = [band for band, _ in selected]
    details = tuple(DetailBands(*bands[3 * k:3 * k + 3]) for k in range(da.levels))

    fused = idwt2(
        replace(da, approx=(da.approx + db.approx) / 2, details=details)
    )

    return FusionResult(image=fused, decisions={label: dec for label, (_, dec) in zip(labels, selected)})


def _contourlet_sf(a: Image, b: Image, cfg: FusionConfig) -> FusionResult:
    ca = ct_forward(a, cfg.pyr_levels, cfg.dfb_depths)
    cb = ct_forward(b, cfg.pyr_levels, cfg.dfb_depths)

    labels = []
    pairs = []
    for i, (level_a, level_b) in enumerate(zip(ca.directional, cb.directional)):
        for j, (band_a, band_b) in enumerate(zip(level_a, level_b)):
            labels.append(f"level{i}-dir{j}")
            pairs.append((band_a, band_b))

    selected = _select_bands(pairs, cfg)

    directional = []
    offset = 0
    for level_a in ca.directional:
        directional.append(tuple(band for band, _ in selected[offset:offset + len(level_a)]))
        offset += len(level_a)

    fused = ct_inverse(
        replace(ca, lowpass=(ca.lowpass + cb.lowpass) / 2, directional=tuple(directional))
    )

    return FusionResult(image=fused, decisions={label: dec for label, (_, dec) in zip(labels, selected)})


_METHODS: Dict[FusionMethod, Callable[[Image, Image, FusionConfig], FusionResult]] = {
    FusionMethod.WAVELET_MAX: _wavelet_max,
    FusionMethod.SPATIAL_SF: _spatial_sf,
    FusionMethod.WAVELET_SF: _wavelet_sf,
    FusionMethod.CONTOURLET_SF: _contourlet_sf,
}


def decision_counts(result: FusionResult) -> Dict[str, int]:
    """
    Tally selection decisions over all subbands

    Args:
        result: Fusion result

    Returns:
        Counts keyed take_a, take_b, average
    """
    counts = {choice.name.lower(): 0 for choice in SelectionChoice}
    for decisions in result.decisions.values():
        values, tally = np.unique(decisions, return_counts=True)
        for value, n in zip(values, tally):
            counts[SelectionChoice(int(value)).name.lower()] += int(n)
    return counts


def fuse_detailed(a: Image, b: Image, cfg: Optional[FusionConfig] = None) -> FusionResult:
    """
    Fuse two images and keep the per-subband decisions

    Args:
        a: Input A
        b: Input B, same dims as A
        cfg: Fusion configuration; defaults to contourlet SF

    Returns:
        Fusion result
    """
    cfg = cfg or FusionConfig()
    a, b = _prepare(a, b)

    result = _METHODS[cfg.method](a, b, cfg)

    logger.info(f"Fused {a.shape[0]}x{a.shape[1]} with {cfg.method.value}: {decision_counts(result)}")

    return result


def fuse(a: Image, b: Image, cfg: Optional[FusionConfig] = None) -> Image:
    """
    Fuse two images with the configured method

    Args:
        a: Input A
        b: Input B, same dims as A
        cfg: Fusion configuration

    Returns:
        Fused image, before quantization
    """
    return fuse_detailed(a, b, cfg).image


def _with_method(cfg: Optional[FusionConfig], method: FusionMethod) -> FusionConfig:
    return replace(cfg or FusionConfig(), method=method)


def fuse_wavelet_max(a: Image, b: Image, cfg: Optional[FusionConfig] = None) -> Image:
    """Wavelet fusion: larger-magnitude details, averaged approximation"""
    return fuse(a, b, _with_method(cfg, FusionMethod.WAVELET_MAX))


def fuse_spatial_sf(a: Image, b: Image, cfg: Optional[FusionConfig] = None) -> Image:
    """Spatial-domain SF block selection"""
    return fuse(a, b, _with_method(cfg, FusionMethod.SPATIAL_SF))


def fuse_wavelet_sf(a: Image, b: Image, cfg: Optional[FusionConfig] = None) -> Image:
    """SF selection inside wavelet detail subbands, averaged approximation"""
    return fuse(a, b, _with_method(cfg, FusionMethod.WAVELET_SF))


def fuse_contourlet_sf(a: Image, b: Image, cfg: Optional[FusionConfig] = None) -> Image:
    """SF selection inside contourlet directional subbands, averaged lowpass"""
    return fuse(a, b, _with_method(cfg, FusionMethod.CONTOURLET_SF))
