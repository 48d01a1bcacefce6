# -*- coding: UTF-8 -*-

import argparse
from typing import List

import numpy as np

from trellisml.cli import CODE_FLAGS, add_setting_flags, settings_from
from trellisml.config import build_code, split_list
from trellisml.convcode import GeneratorMatrix, Message, encode
from trellisml.exceptions import UsageError


def read_values(text: str = None, path: str = None, kind=float) -> List:
    """
    Values from a comma-separated argument or a newline-separated file.
    """
    if path is not None:
        with open(path, "r") as f:
            text = f.read()
    if text is None:
        raise UsageError("no input given (use --msg/--rx or --file)")
    return split_list(text, kind)


def main_encode(code: GeneratorMatrix, symbols: List[int]):
    if len(symbols) % code.k:
        raise UsageError("message has %d symbols, not a multiple of k=%d" % (len(symbols), code.k))
    msg = Message(np.array(symbols, dtype=np.int64).reshape(-1, code.k), code.field)
    for row in encode(msg, code).tolist():
        print(",".join(str(v) for v in row))


def register(subparsers) -> argparse.ArgumentParser:
    parser = subparsers.add_parser("encode", help="encode a message", description="Print the codeword of a message, "
                                                                                  "one symbol per line")
    add_setting_flags(parser, CODE_FLAGS)
    parser.add_argument("--msg", "-m", help="comma-separated source symbols (row-major when k > 1)")
    parser.add_argument("--file", "-f", help="file with one source symbol per line")
    return parser


def run(args: argparse.Namespace):
    settings = settings_from(args)
    main_encode(
        code=build_code(settings),
        symbols=read_values(args.msg, args.file, int),
    )
