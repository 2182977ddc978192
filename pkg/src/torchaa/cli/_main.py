"""Command-line entry point."""

__all__ = ["main", "build_parser", "EXIT_PASS", "EXIT_FAIL", "EXIT_USAGE", "EXIT_ERROR"]

import argparse
import json
import logging
import sys

from pathlib import Path

import torch

from ..base.errors import ActionAngleError, ConfigError
from ..utils import to_jsonable
from ._commands import cmd_analyze, cmd_catalog, cmd_chart, cmd_emit
from ._config import load_config

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_ERROR = 3

_EXIT_CODES = {"pass": EXIT_PASS, "fail": EXIT_FAIL, "error": EXIT_ERROR}


def _u64(text):
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"{text} is not an unsigned 64-bit integer")
    return value


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"{text} is not a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with the ``analyze``, ``chart``, ``emit`` and ``catalog`` subcommands."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0, help="more log output (repeatable)")
    common.add_argument("-q", "--quiet", action="store_true", help="only log errors")

    job = argparse.ArgumentParser(add_help=False, parents=[common])
    job.add_argument("--config", type=Path, required=True, help="job configuration (JSON)")
    job.add_argument("--out", type=Path, default=None, help="output directory (overrides the config)")
    job.add_argument("--seed-rng", type=_u64, default=None, help="seed of the random sample placement")
    job.add_argument("--threads", type=_positive_int, default=None, help="number of torch threads")

    parser = argparse.ArgumentParser(
        prog="torchaa",
        description="Numerical action-angle coordinates of integrable Hamiltonian systems.",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("analyze", parents=[job], help="check the hypotheses over a level box")
    commands.add_parser("chart", parents=[job], help="build, gauge-fix and verify a chart")
    commands.add_parser("emit", parents=[job], help="write CSV data series of a chart")
    catalog = commands.add_parser("catalog", parents=[common], help="describe the reference systems")
    catalog.add_argument("name", nargs="?", default=None, help="entry name, e.g. 'sho(2)'")
    return parser


def _configure_logging(verbose: int, quiet: bool):
    if quiet:
        level = logging.ERROR
    else:
        level = max(logging.DEBUG, logging.WARNING - 10 * verbose)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def main(argv: list[str] | None = None) -> int:
    """
    Run the command line.

    Returns
    -------
    int
        ``0`` if every configured check passed, ``1`` if a check failed,
        ``2`` on usage or configuration errors and ``3`` if a numerical
        stage failed.

    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_PASS if err.code == 0 else EXIT_USAGE
    _configure_logging(args.verbose, args.quiet)

    try:
        if args.command == "catalog":
            document = cmd_catalog(args.name)
            print(json.dumps(to_jsonable(document["entries"]), indent=1, sort_keys=True))
            return EXIT_PASS

        config = load_config(args.config)
        if args.out is not None:
            config = config.replace(output=args.out)
        if args.seed_rng is not None:
            config = config.replace(rng_seed=args.seed_rng)
        if args.threads is not None:
            torch.set_num_threads(args.threads)

        if args.command == "analyze":
            document = cmd_analyze(config)
        elif args.command == "chart":
            document = cmd_chart(config)
        else:
            document = cmd_emit(config)
    except ConfigError as err:
        logger.error("%s", err)
        return EXIT_USAGE
    except ActionAngleError as err:
        logger.error("%s", err)
        return EXIT_ERROR
    return _EXIT_CODES[document["status"]]
