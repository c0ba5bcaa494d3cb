"""
Grayscale raster model, PNM file I/O, padding and block partitioning
"""

import logging
import math
import re
from dataclasses import dataclass
from typing import Iterator, Tuple

import numpy as np

from focusfuse.utils.errors import DimensionError, ConfigError, PnmFormatError, StructureError
from focusfuse.utils.output import PathLike, write_atomic


logger = logging.getLogger(__name__)


# 2-D float64 raster, rows x cols
Image = np.ndarray

LUMA_WEIGHTS = (0.299, 0.587, 0.114)

# magic -> (channels, binary)
_PNM_KINDS = {
    b"P2": (1, False),
    b"P5": (1, True),
    b"P3": (3, False),
    b"P6": (3, True),
}

_TOKEN_RE = re.compile(rb"\S+")


@dataclass(frozen=True)
class BlockGrid:
    """
    Image split into M x N tiles

    Attributes:
        source_shape: (H, W) of the partitioned image
        block_shape: Nominal (M, N) tile size; edge tiles may be smaller
        blocks: Rows of tiles, blocks[r][c] covers rows [rM, min((r+1)M, H))
            and cols [cN, min((c+1)N, W))
    """
    source_shape: Tuple[int, int]
    block_shape: Tuple[int, int]
    blocks: Tuple[Tuple[Image, ...], ...]

    @property
    def grid_shape(self) -> Tuple[int, int]:
        return len(self.blocks), (len(self.blocks[0]) if self.blocks else 0)


def as_image(data, name: str = "image") -> Image:
    """
    Validate and convert raster data to a float64 image

    Args:
        data: Array-like 2-D raster
        name: Label used in error messages

    Returns:
        2-D float64 array
    """
    img = np.asarray(data, dtype=np.float64)

    if img.ndim != 2 or img.shape[0] < 1 or img.shape[1] < 1:
        raise DimensionError(f"{name} must be a non-empty 2-D raster, got shape {img.shape}")

    if not np.all(np.isfinite(img)):
        raise StructureError(f"{name} contains non-finite samples")

    return img


def require_same_shape(*images: Image) -> None:
    """Raise DimensionError unless all images share one shape"""
    shapes = {img.shape for img in images}
    if len(shapes) > 1:
        raise DimensionError(f"image dimensions differ: {sorted(shapes)}")


def to_luma(rgb: np.ndarray) -> Image:
    """
    Collapse an H x W x 3 raster to Rec.601 luma

    Args:
        rgb: Color raster with channels last

    Returns:
        Grayscale image
    """
    r, g, b = (rgb[..., k].astype(np.float64) for k in range(3))
    wr, wg, wb = LUMA_WEIGHTS

    return wr * r + wg * g + wb * b


def _skip_header_space(data: bytes, pos: int) -> int:
    while pos < len(data):
        ch = data[pos:pos + 1]
        if ch == b"#":
            newline = data.find(b"\n", pos)
            pos = len(data) if newline < 0 else newline + 1
        elif ch.isspace():
            pos += 1
        else:
            break
    return pos


def decode_pnm(data: bytes) -> Image:
    """
    Decode PGM (P2/P5) or PPM (P3/P6) bytes into a grayscale image

    Color payloads are collapsed to luma. Samples are rescaled to [0, 255]
    when maxval is below 255.

    Args:
        data: File contents

    Returns:
        Decoded image
    """
    magic = data[:2]
    if magic not in _PNM_KINDS:
        raise PnmFormatError(f"unsupported magic {magic!r}", 0)

    channels, binary = _PNM_KINDS[magic]

    pos = 2
    if pos >= len(data) or not (data[pos:pos + 1].isspace() or data[pos:pos + 1] == b"#"):
        raise PnmFormatError("expected whitespace after magic", pos)

    header = []
    while len(header) < 3:
        pos = _skip_header_space(data, pos)
        start = pos
        while pos < len(data) and data[pos:pos + 1].isdigit():
            pos += 1
        if start == pos:
            raise PnmFormatError("expected header integer", start)
        header.append(int(data[start:pos]))

    width, height, maxval = header

    if width < 1 or height < 1:
        raise PnmFormatError(f"invalid dimensions {width}x{height}", pos)

    if not 1 <= maxval <= 255:
        raise PnmFormatError(f"maxval {maxval} not supported (must be 1..255)", pos)

    # exactly one whitespace byte separates the header from the raster
    if pos >= len(data) or not data[pos:pos + 1].isspace():
        raise PnmFormatError("expected whitespace after maxval", pos)
    pos += 1

    count = width * height * channels

    if binary:
        if len(data) - pos < count:
            raise PnmFormatError(f"truncated raster: need {count} bytes, have {len(data) - pos}", len(data))
        samples = np.frombuffer(data, dtype=np.uint8, count=count, offset=pos).astype(np.float64)
        offsets = pos + np.arange(count)
    else:
        tokens = []
        for match in _TOKEN_RE.finditer(data, pos):
            if len(tokens) == count:
                break
            if not match.group().isdigit():
                raise PnmFormatError(f"invalid sample {match.group()!r}", match.start())
            tokens.append((int(match.group()), match.start()))
        if len(tokens) < count:
            raise PnmFormatError(f"truncated raster: need {count} samples, have {len(tokens)}", len(data))
        samples = np.array([value for value, _ in tokens], dtype=np.float64)
        offsets = np.array([offset for _, offset in tokens])

    over = np.flatnonzero(samples > maxval)
    if over.size:
        raise PnmFormatError(f"sample exceeds maxval {maxval}", int(offsets[over[0]]))

    if maxval != 255:
        samples = samples * (255.0 / maxval)

    if channels == 3:
        img = to_luma(samples.reshape(height, width, 3))
    else:
        img = samples.reshape(height, width)

    logger.debug(f"Decoded {magic.decode()} {width}x{height} maxval={maxval}")

    return img


def quantize(img: Image) -> np.ndarray:
    """
    Quantize samples to 8-bit

    Rounds half away from zero, then clamps to [0, 255].

    Args:
        img: Image

    Returns:
        uint8 array of the same shape
    """
    rounded = np.sign(img) * np.floor(np.abs(img) + 0.5)

    return np.clip(rounded, 0, 255).astype(np.uint8)


def encode_pgm(img: Image) -> bytes:
    """
    Encode an image as binary PGM (P5, maxval 255)

    Args:
        img: Image

    Returns:
        File contents
    """
    img = as_image(img)
    height, width = img.shape
    header = f"P5\n{width} {height}\n255\n".encode("ascii")

    return header + quantize(img).tobytes()


def load_pnm(path: PathLike) -> Image:
    """
    Read a PGM or PPM file

    Args:
        path: File path

    Returns:
        Grayscale image
    """
    with open(path, "rb") as handle:
        data = handle.read()

    return decode_pnm(data)


def save_pnm(img: Image, path: PathLike) -> None:
    """
    Write an image as binary PGM, atomically

    Args:
        img: Image
        path: Destination file
    """
    write_atomic(path, encode_pgm(img))


def pad_replicate(img: Image, target: Tuple[int, int]) -> Image:
    """
    Grow an image to target dims by replicating its last row and column

    Args:
        img: Image
        target: (rows, cols), each at least the source size

    Returns:
        Padded image; the original region is unchanged
    """
    height, width = img.shape
    rows, cols = target

    if rows < height or cols < width:
        raise DimensionError(f"cannot pad {height}x{width} to smaller {rows}x{cols}")

    if (rows, cols) == (height, width):
        return img.copy()

    return np.pad(img, ((0, rows - height), (0, cols - width)), mode="edge")


def pad_to_multiple(img: Image, multiple: int) -> Image:
    """Replicate-pad so both dims are divisible by multiple"""
    height, width = img.shape
    target = (-(-height // multiple) * multiple, -(-width // multiple) * multiple)

    return pad_replicate(img, target)


def crop(img: Image, dims: Tuple[int, int]) -> Image:
    """
    Top-left sub-raster

    Args:
        img: Image
        dims: (rows, cols), each at most the source size

    Returns:
        Cropped copy
    """
    rows, cols = dims
    height, width = img.shape

    if rows < 1 or cols < 1 or rows > height or cols > width:
        raise DimensionError(f"cannot crop {height}x{width} to {rows}x{cols}")

    return img[:rows, :cols].copy()


def block_slices(shape: Tuple[int, int], block_rows: int, block_cols: int) -> Iterator[Tuple[int, int, slice, slice]]:
    """
    Iterate the tiles covering a raster in row-major order

    Args:
        shape: (H, W) of the raster
        block_rows: Nominal tile height M
        block_cols: Nominal tile width N

    Yields:
        (r, c, row slice, col slice) per tile
    """
    if block_rows < 1 or block_cols < 1:
        raise ConfigError(f"block dims must be >= 1, got {block_rows}x{block_cols}")

    height, width = shape
    for r in range(math.ceil(height / block_rows)):
        for c in range(math.ceil(width / block_cols)):
            yield (
                r,
                c,
                slice(r * block_rows, min((r + 1) * block_rows, height)),
                slice(c * block_cols, min((c + 1) * block_cols, width)),
            )


def partition_blocks(img: Image, block_rows: int, block_cols: int) -> BlockGrid:
    """
    Split an image into M x N blocks; edge blocks are truncated, never padded

    Args:
        img: Image
        block_rows: M
        block_cols: N

    Returns:
        Block grid of ceil(H/M) x ceil(W/N) tiles
    """
    rows = []
    row = []
    for r, c, rs, cs in block_slices(img.shape, block_rows, block_cols):
        if c == 0 and row:
            rows.append(tuple(row))
            row = []
        row.append(img[rs, cs].copy())
    rows.append(tuple(row))

    return BlockGrid(
        source_shape=(img.shape[0], img.shape[1]),
        block_shape=(block_rows, block_cols),
        blocks=tuple(rows),
    )


def assemble_blocks(grid: BlockGrid) -> Image:
    """
    Reassemble a block grid into its source raster

    Args:
        grid: Block grid

    Returns:
        Image of the grid's source dims
    """
    height, width = grid.source_shape
    block_rows, block_cols = grid.block_shape

    expected_rows = math.ceil(height / block_rows)
    expected_cols = math.ceil(width / block_cols)

    if len(grid.blocks) != expected_rows or any(len(row) != expected_cols for row in grid.blocks):
        raise StructureError(f"grid layout does not match {expected_rows}x{expected_cols} tiles")

    out = np.empty((height, width), dtype=np.float64)
    for r, c, rs, cs in block_slices((height, width), block_rows, block_cols):
        block = np.asarray(grid.blocks[r][c])
        want = (rs.stop - rs.start, cs.stop - cs.start)
        if block.shape != want:
            raise StructureError(f"block ({r},{c}) has shape {block.shape}, expected {want}")
        out[rs, cs] = block

    return out
