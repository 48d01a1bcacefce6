# -*- coding: UTF-8 -*-

import argparse
import csv
import logging
import sys
from typing import Optional, TextIO

from trellisml.cli import CHANNEL_FLAGS, CODE_FLAGS, NLL_FLAGS, add_setting_flags, settings_from
from trellisml.config import build_code, build_mapper, build_trial_config
from trellisml.experiments import SWEEP_KINDS, SweepResult, TrialConfig, run_sweep

logger = logging.getLogger(__name__)

COLUMNS = ("decoder", "snr", "N", "trials", "mean_visited_per_t", "std_visited_per_t", "ml_match_rate",
           "sub_symbol_err", "opt_m_rate", "sll_accept_rate", "seed")


def _field(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return "%.9g" % value
    return str(value)


def write_rows(result: SweepResult, out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(COLUMNS)
    for cell in result.sorted_cells():
        writer.writerow([_field(getattr(cell, column)) for column in COLUMNS])


def write_csv(result: SweepResult, path: Optional[str] = None) -> None:
    """
    :param path: output file, standard output when ``None``
    """
    if path is None:
        write_rows(result, sys.stdout)
        return
    with open(path, "w", newline="") as f:
        write_rows(result, f)
    logger.info("wrote %d rows to %s", len(result.cells), path)


def main_sweep(cfg: TrialConfig, kind: str, output: Optional[str] = None, show_progress: bool = True):
    write_csv(run_sweep(kind, cfg, show_progress=show_progress), output)


def register(subparsers) -> argparse.ArgumentParser:
    parser = subparsers.add_parser("sweep", help="run a Monte-Carlo sweep",
                                   description="Run seeded trials over the SNR x N grid and write a CSV")
    add_setting_flags(parser, CODE_FLAGS + CHANNEL_FLAGS + NLL_FLAGS +
                      ["N", "trials", "decoders", "guess_mode", "strategy", "list_size", "perturb_count",
                       "perturb_fraction", "oracle_budget", "threads"])
    parser.add_argument("--kind", dest="kind", default=None, help="one of %s (default: complexity)" % ", ".join(SWEEP_KINDS))
    parser.add_argument("--output", "-o", help="CSV file (default: standard output)")
    parser.add_argument("--no-progress", action="store_true", help="hide the progress bar")
    return parser


def run(args: argparse.Namespace):
    settings = settings_from(args)
    code = build_code(settings)
    cfg = build_trial_config(settings, code, build_mapper(settings, code.field))
    kind = settings.get("sweep", "kind", "complexity")
    main_sweep(cfg, kind, args.output, show_progress=not args.no_progress and args.output is not None)
