"""Command line interface.

Subcommands chain the pipeline through files::

    regfm synthesize   --out F.txt
    regfm perturb      --input F.txt --out Fd.txt
    regfm reconstruct  --input Fd.txt --out field      # field.csv + field.pgm
    regfm param-select --input Fd.txt
    regfm verify       --out reports.txt
    regfm picard       --input F.txt --z 0.1 0.2 --out picard.csv

Exit codes: 0 success, 1 invalid input, 2 numerical failure (including a
violated bound in ``verify``), 3 file errors.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

from src.config import get_settings
from src.exceptions import DataFormatError, NumericalError, RegFMError
from src.logging_config import setup_logging
from src.models.run_config import RunConfig
from src.models.verification import BoundStatus
from src.observability import write_metrics_file
from src.services import file_formats, pipeline
from src.services.config_parser import parse_config
from src.version import __version__

logger = logging.getLogger(__name__)


def _seed(value: str) -> int:
    seed = int(value)
    if seed < 0:
        raise argparse.ArgumentTypeError(f"seed must be nonnegative, got {seed}")
    return seed


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subparser per pipeline stage."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="Run configuration file (key = value)")
    common.add_argument("--seed", type=_seed, help="Override every seed in the config")
    common.add_argument("--quiet", action="store_true", help="Only log warnings and errors")
    common.add_argument("--log-format", choices=["json", "text"], help="Console log format")
    common.add_argument(
        "--metrics-file", type=Path, help="Write Prometheus metrics to this file on exit"
    )

    parser = argparse.ArgumentParser(
        prog="regfm",
        description="Regularized factorization method for noisy far-field data.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    cmd = sub.add_parser("synthesize", parents=[common], help="Born far-field matrix")
    cmd.add_argument("--out", type=Path, required=True, help="Matrix file to write")

    cmd = sub.add_parser("perturb", parents=[common], help="Add multiplicative noise")
    cmd.add_argument("--input", type=Path, required=True, help="Far-field matrix file")
    cmd.add_argument("--out", type=Path, required=True, help="Noisy matrix file to write")

    cmd = sub.add_parser("reconstruct", parents=[common], help="Imaging functional W(z)")
    cmd.add_argument("--input", type=Path, required=True, help="Far-field matrix file")
    cmd.add_argument(
        "--out", type=Path, required=True, help="Output stem; .csv and .pgm are appended"
    )

    cmd = sub.add_parser("param-select", parents=[common], help="Regularization parameter α(δ)")
    cmd.add_argument("--input", type=Path, required=True, help="Noisy far-field matrix file")
    cmd.add_argument("--out", type=Path, help="Also write the result to this file")

    cmd = sub.add_parser("verify", parents=[common], help="Perturbation-bound sweep")
    cmd.add_argument("--out", type=Path, required=True, help="Bound-report file to write")

    cmd = sub.add_parser("picard", parents=[common], help="Picard partial sums at a point")
    cmd.add_argument("--input", type=Path, required=True, help="Far-field matrix file")
    cmd.add_argument("--z", type=float, nargs=2, required=True, metavar=("X", "Y"))
    cmd.add_argument("--out", type=Path, required=True, help="CSV table to write")

    return parser


def load_config(path: Optional[Path], seed: Optional[int] = None) -> RunConfig:
    """Parse the config file (or the defaults) and apply the seed override."""
    config = parse_config(path.read_text(encoding="utf-8") if path else "")
    if seed is not None:
        config = config.with_seed(seed)
    return config


def _synthesize(args: argparse.Namespace, config: RunConfig) -> int:
    file_formats.write_matrix(pipeline.synthesize(config), args.out)
    return 0


def _perturb(args: argparse.Namespace, config: RunConfig) -> int:
    matrix = file_formats.read_matrix(args.input)
    file_formats.write_matrix(pipeline.perturb(matrix, config), args.out)
    return 0


def _reconstruct(args: argparse.Namespace, config: RunConfig) -> int:
    result = pipeline.reconstruct_field(file_formats.read_matrix(args.input), config)
    if config.output.csv:
        file_formats.write_field_csv(result.field, args.out.with_suffix(".csv"))
    if config.output.pgm:
        file_formats.write_pgm(result.normalized, args.out.with_suffix(".pgm"))
    print(f"jaccard={result.jaccard:.6f}")
    return 0


def _param_select(args: argparse.Namespace, config: RunConfig) -> int:
    choice = pipeline.select_parameter(file_formats.read_matrix(args.input), config)
    print(choice.summary())
    if args.out:
        file_formats.atomic_write(args.out, choice.summary() + "\n")
    return 0


def _verify(args: argparse.Namespace, config: RunConfig) -> int:
    reports = pipeline.verify(config)
    file_formats.write_reports(reports, args.out)
    violated = [r for r in reports if r.status is BoundStatus.VIOLATED]
    checked = sum(1 for r in reports if r.checked)
    print(f"reports={len(reports)} checked={checked} violated={len(violated)}")
    if violated:
        logger.error("%d bound checks violated; first: %s", len(violated), violated[0].bound_name)
        return NumericalError.exit_code
    return 0


def _picard(args: argparse.Namespace, config: RunConfig) -> int:
    report = pipeline.picard_table(file_formats.read_matrix(args.input), config, args.z)
    file_formats.write_picard_table(report, args.out)
    return 0


COMMANDS: Dict[str, Callable[[argparse.Namespace, RunConfig], int]] = {
    "synthesize": _synthesize,
    "perturb": _perturb,
    "reconstruct": _reconstruct,
    "param-select": _param_select,
    "verify": _verify,
    "picard": _picard,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand and return its exit code."""
    args = build_parser().parse_args(argv)
    settings = get_settings()
    setup_logging(level="WARNING" if args.quiet else None, fmt=args.log_format)

    try:
        config = load_config(args.config, args.seed)
        logger.info("Running %s", args.command)
        return COMMANDS[args.command](args, config)
    except RegFMError as e:
        logger.error("%s failed: %s", args.command, e)
        return e.exit_code
    except OSError as e:
        logger.error("%s failed: %s", args.command, e)
        return DataFormatError.exit_code
    finally:
        if args.metrics_file and settings.metrics_enabled:
            try:
                write_metrics_file(args.metrics_file)
            except OSError as e:
                logger.warning("Could not write metrics to %s: %s", args.metrics_file, e)


if __name__ == "__main__":
    sys.exit(main())
