"""
fuse command - fuse one multifocus pair
"""

import logging

import click

from focusfuse.components.fusion import FusionConfig, decision_counts, fuse_detailed
from focusfuse.components.imgcore import load_pnm, save_pnm
from focusfuse.utils.formatting import format_dims
from focusfuse.utils.output import PathLike


logger = logging.getLogger(__name__)


def run_fuse_command(
    path_a: PathLike,
    path_b: PathLike,
    output: PathLike,
    cfg: FusionConfig,
    show_decisions: bool = False
) -> int:
    """
    Fuse two PGM files into one

    Args:
        path_a: Input A
        path_b: Input B
        output: Destination PGM
        cfg: Fusion configuration
        show_decisions: Also print the per-choice decision counts

    Returns:
        Exit code
    """
    a = load_pnm(path_a)
    b = load_pnm(path_b)

    logger.info(f"Loaded {path_a} ({format_dims(a.shape)}) and {path_b} ({format_dims(b.shape)})")

    result = fuse_detailed(a, b, cfg)
    save_pnm(result.image, output)

    click.echo(f"{output}: {format_dims(result.image.shape)} fused with {cfg.method.value}")

    if show_decisions:
        counts = decision_counts(result)
        click.echo(", ".join(f"{name}={count}" for name, count in counts.items()))

    return 0
