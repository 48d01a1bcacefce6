# -*- coding: UTF-8 -*-

"""
``trellis-ml`` entry point. Exit status: 0 on success, 1 on usage errors, 2 on
runtime errors.
"""

import argparse
import logging
import sys
from typing import List, Optional

from trellisml.__version__ import __version__
from trellisml.config import FLAGS, Settings
from trellisml.exceptions import TrellisException, UsageError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILURE = 2


class ArgumentParser(argparse.ArgumentParser):
    """
    Reports usage errors as ``UsageError`` instead of exiting.
    """

    def error(self, message):
        raise UsageError(message)


FLAG_HELP = {
    "q": "field size (prime)",
    "k": "source symbol dimension",
    "n": "codeword symbol dimension",
    "nu": "coding memory",
    "octal": "binary generators in octal, e.g. 7,5",
    "taps": "row-major generator taps G[0][0][0],G[0][0][1],...",
    "snr": "signal to noise ratio (comma-separated grid for sweeps)",
    "sigma2": "noise variance, instead of --snr",
    "seed": "random seed",
    "map": "symbol map values, one per field element",
    "xi": "window test constant",
    "M": "window test multiplier",
    "condition_a": "residual condition: literal, squared or scaled",
    "boundary": "window boundary handling: clip or extend",
    "N": "block length (comma-separated grid for sweeps)",
    "trials": "trials per cell",
    "decoders": "decoders to run, comma-separated",
    "guess_mode": "ideal or suboptimal",
    "strategy": "decision_feedback, list or list(L)",
    "list_size": "list size for the list strategy",
    "perturb_count": "perturbed symbols for the sll sweep",
    "perturb_fraction": "position of the perturbation as a fraction of N",
    "oracle_budget": "largest message space checked by brute force",
    "threads": "worker processes (default: $TRELLIS_ML_THREADS or 1)",
}


def add_setting_flags(parser: argparse.ArgumentParser, names: List[str]) -> None:
    for name in names:
        parser.add_argument("--" + name.replace("_", "-"), dest=name, default=None, help=FLAG_HELP.get(name))


CODE_FLAGS = ["q", "k", "n", "nu", "octal", "taps"]
CHANNEL_FLAGS = ["snr", "sigma2", "seed", "map"]
NLL_FLAGS = ["xi", "M", "condition_a", "boundary"]


def settings_from(args: argparse.Namespace) -> Settings:
    settings = Settings.load(getattr(args, "config", None))
    return settings.override({name: getattr(args, name, None) for name in FLAGS})


def build_parser() -> ArgumentParser:
    from trellisml.cli import decode, encode, simulate, sweep

    parser = ArgumentParser(prog="trellis-ml", description="Maximum-likelihood decoding of convolutional codes")
    parser.add_argument("--version", action="version", version="%(prog)s " + __version__)
    parser.add_argument("--verbose", "-v", action="store_true", help="debug logging on stderr")
    subparsers = parser.add_subparsers(dest="command", parser_class=ArgumentParser)
    subparsers.required = True
    for module in (encode, decode, simulate, sweep):
        sub = module.register(subparsers)
        sub.add_argument("--config", "-c", help="TOML configuration file")
        sub.set_defaults(handler=module.run)
    return parser


def parse_and_dispatch(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print("trellis-ml: error: %s" % e, file=sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        args.handler(args)
    except UsageError as e:
        print("trellis-ml: error: %s" % e, file=sys.stderr)
        return EXIT_USAGE
    except (TrellisException, OSError) as e:
        print("trellis-ml: %s" % e, file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


def main():
    sys.exit(parse_and_dispatch())
