"""
FocusFuse - multifocus image fusion command-line tool
"""

import logging
import sys
from typing import Callable, List, Optional

import click
from rich.console import Console
from rich.logging import RichHandler

from focusfuse.commands.bench import run_bench_command
from focusfuse.commands.fuse import run_fuse_command
from focusfuse.commands.metrics import run_metrics_command
from focusfuse.commands.selfcheck import DEFAULT_TRIALS, run_selfcheck_command
from focusfuse.commands.synth import run_synth_command
from focusfuse.components.fusion import (
    DEFAULT_BLOCK,
    DEFAULT_THRESHOLD,
    FusionConfig,
    FusionMethod,
    Granularity,
)
from focusfuse.components.synth import FocusMask, MaskKind
from focusfuse.components.wavelet import DEFAULT_FILTER, WAVELET_FILTERS
from focusfuse.utils.errors import ConfigError, FocusFuseError, PnmFormatError
from focusfuse.utils.formatting import parse_block, parse_depths, parse_dims
from focusfuse.utils.settings import get_log_level


EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_INVALID = 3

DEFAULT_SIGMA = 2.0


def setup_logging(verbosity: int = 0) -> None:
    """Route log records to standard error through rich"""
    logging.basicConfig(
        level=get_log_level(verbosity),
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


def _parsed(parser: Callable):
    """Wrap a text parser as a click callback"""
    def callback(ctx, param, value):
        if value is None:
            return None
        try:
            return parser(value)
        except ConfigError as e:
            raise click.BadParameter(str(e), ctx=ctx, param=param)
    return callback


def _ground_truth_source(gt_path: Optional[str], chart) -> None:
    if (gt_path is None) == (chart is None):
        raise click.UsageError("give exactly one of --gt or --chart")


ground_truth_options = [
    click.option("--gt", "gt_path", type=click.Path(dir_okay=False), help="Ground truth PGM"),
    click.option("--chart", callback=_parsed(parse_dims), help="Generate an HxW test chart instead"),
    click.option("--seed", type=int, default=0, show_default=True, help="Test chart seed"),
    click.option("--mask", type=click.Choice([k.value for k in MaskKind]), default=MaskKind.VERTICAL_HALF.value,
                 show_default=True, help="Region where input A is sharp"),
    click.option("--sigma", type=click.FloatRange(min=0.0), default=DEFAULT_SIGMA, show_default=True,
                 help="Gaussian blur of the out-of-focus regions"),
]


def with_ground_truth_options(func):
    for option in reversed(ground_truth_options):
        func = option(func)
    return func


@click.group()
@click.option("-v", "--verbose", count=True, help="-v for INFO, -vv for DEBUG logging")
def cli(verbose: int):
    """Fuse multifocus image pairs and evaluate the results"""
    setup_logging(verbose)


@cli.command()
@click.option("-m", "--method", type=click.Choice([m.value for m in FusionMethod]),
              default=FusionMethod.CONTOURLET_SF.value, show_default=True, help="Fusion method")
@click.option("-b", "--block", default=str(DEFAULT_BLOCK), show_default=True,
              callback=_parsed(parse_block), help="SF block size, M or MxN")
@click.option("-t", "--threshold", type=float, default=DEFAULT_THRESHOLD, show_default=True,
              help="Dead zone between take-A and take-B")
@click.option("--wavelet-levels", type=int, default=1, show_default=True)
@click.option("--wavelet-filter", type=click.Choice(sorted(WAVELET_FILTERS)), default=DEFAULT_FILTER, show_default=True)
@click.option("--lp-levels", type=int, default=1, show_default=True, help="Laplacian pyramid levels")
@click.option("--dfb-depths", default="3", show_default=True, callback=_parsed(parse_depths),
              help="Directional depths per pyramid level, coarse to fine; one value applies to every level")
@click.option("--granularity", type=click.Choice([g.value for g in Granularity]),
              default=Granularity.BLOCK.value, show_default=True)
@click.option("-o", "--output", required=True, type=click.Path(dir_okay=False), help="Fused PGM")
@click.option("--decisions", is_flag=True, help="Print selection decision counts")
@click.argument("input_a", type=click.Path(dir_okay=False))
@click.argument("input_b", type=click.Path(dir_okay=False))
def fuse(method, block, threshold, wavelet_levels, wavelet_filter, lp_levels, dfb_depths,
         granularity, output, decisions, input_a, input_b):
    """Fuse INPUT_A and INPUT_B into one all-in-focus image"""
    if len(dfb_depths) == 1:
        dfb_depths = dfb_depths * max(lp_levels, 1)

    cfg = FusionConfig(
        method=method,
        block_rows=block[0],
        block_cols=block[1],
        threshold=threshold,
        wavelet_levels=wavelet_levels,
        wavelet_filter=wavelet_filter,
        pyr_levels=lp_levels,
        dfb_depths=tuple(dfb_depths),
        granularity=granularity,
    )

    return run_fuse_command(input_a, input_b, output, cfg, show_decisions=decisions)


@cli.command()
@with_ground_truth_options
@click.option("--out-a", required=True, type=click.Path(dir_okay=False), help="Input A destination")
@click.option("--out-b", required=True, type=click.Path(dir_okay=False), help="Input B destination")
@click.option("--out-gt", type=click.Path(dir_okay=False), help="Also write the ground truth")
def synth(gt_path, chart, seed, mask, sigma, out_a, out_b, out_gt):
    """Generate a synthetic multifocus pair"""
    _ground_truth_source(gt_path, chart)

    return run_synth_command(gt_path, chart, seed, FocusMask(mask), sigma, out_a, out_b, out_gt)


@cli.command()
@click.option("--inputs", nargs=2, required=True, type=click.Path(dir_okay=False), help="Inputs A and B")
@click.option("--fused", required=True, type=click.Path(dir_okay=False), help="Fused image")
@click.option("--ground-truth", type=click.Path(dir_okay=False), help="All-in-focus reference")
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), help="Write the figures as CSV")
def metrics(inputs, fused, ground_truth, csv_path):
    """Evaluate a fused image"""
    return run_metrics_command(inputs[0], inputs[1], fused, ground_truth, csv_path)


@cli.command()
@with_ground_truth_options
@click.option("--csv", "csv_path", required=True, type=click.Path(dir_okay=False), help="Results table")
@click.option("--out-dir", type=click.Path(file_okay=False), help="Also write the pair and every fused image")
def bench(gt_path, chart, seed, mask, sigma, csv_path, out_dir):
    """Compare all four fusion methods on a synthetic pair"""
    _ground_truth_source(gt_path, chart)

    return run_bench_command(gt_path, chart, seed, FocusMask(mask), sigma, csv_path, out_dir)


@cli.command()
@click.option("--size", default="128x128", show_default=True, callback=_parsed(parse_dims), help="Test image HxW")
@click.option("--trials", type=click.IntRange(min=1), default=DEFAULT_TRIALS, show_default=True,
              help="Random blocks for the SF oracle")
@click.option("--seed", type=int, default=0, show_default=True)
def selfcheck(size, trials, seed):
    """Check transform reconstruction and the SF measure"""
    return run_selfcheck_command(size, trials, seed)


def run(argv: Optional[List[str]] = None) -> int:
    """
    Run the CLI and map failures onto exit codes

    Args:
        argv: Arguments without the program name; defaults to sys.argv[1:]

    Returns:
        0 success, 1 usage error, 2 I/O error, 3 invalid dimensions,
        parameters or data
    """
    try:
        rc = cli.main(args=argv, prog_name="focusfuse", standalone_mode=False)
    except click.UsageError as e:
        e.show()
        return EXIT_USAGE
    except click.Abort:
        click.echo("Aborted", err=True)
        return EXIT_USAGE
    except click.ClickException as e:
        e.show()
        return EXIT_USAGE
    except PnmFormatError as e:
        click.echo(f"Error: {e}", err=True)
        return EXIT_IO
    except OSError as e:
        click.echo(f"Error: {e}", err=True)
        return EXIT_IO
    except FocusFuseError as e:
        click.echo(f"Error: {e}", err=True)
        return EXIT_INVALID

    return rc if isinstance(rc, int) else EXIT_OK


def main():
    """Console entry point"""
    sys.exit(run())


if __name__ == "__main__":
    main()
