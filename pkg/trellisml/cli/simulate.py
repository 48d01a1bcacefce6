# -*- coding: UTF-8 -*-

import argparse

from trellisml.cli import CHANNEL_FLAGS, CODE_FLAGS, NLL_FLAGS, add_setting_flags, settings_from
from trellisml.config import build_code, build_mapper, build_trial_config
from trellisml.experiments import SWEEP_KINDS, TrialConfig, run_trial


def main_simulate(cfg: TrialConfig, trial: int, kind: str = "complexity"):
    record = run_trial(cfg, trial, kind=kind)
    print("trial %d: snr=%g N=%d" % (record.trial, record.snr, record.N))
    for name, outcome in sorted(record.outcomes.items()):
        print("%s: metric=%.9g visited=%d (%.4g per index)"
              % (name, outcome.metric, outcome.visited_states, outcome.normalized))
        for stage, cost in sorted(outcome.stage_costs.items()):
            print("  %s: %.4g per index" % (stage, cost))
    if record.oracle_checked:
        print("brute force: agrees")
    if record.sub_symbol_err is not None:
        print("suboptimal symbol error rate: %.4g" % record.sub_symbol_err)
    if record.opt_m is not None:
        print("window test: %s" % ("passed" if record.opt_m else "failed"))
    if record.sll_accept is not None:
        print("prefix bound test: %s" % ("accepted" if record.sll_accept else "rejected"))


def register(subparsers) -> argparse.ArgumentParser:
    parser = subparsers.add_parser("simulate", help="run one seeded trial",
                                   description="Draw, encode, transmit and decode one seeded trial")
    add_setting_flags(parser, CODE_FLAGS + CHANNEL_FLAGS + NLL_FLAGS +
                      ["N", "decoders", "guess_mode", "strategy", "list_size", "perturb_count",
                       "perturb_fraction", "oracle_budget"])
    parser.add_argument("--trial", "-t", type=int, default=0, help="trial index")
    parser.add_argument("--kind", choices=SWEEP_KINDS, default="complexity", help="what to measure")
    return parser


def run(args: argparse.Namespace):
    settings = settings_from(args)
    code = build_code(settings)
    cfg = build_trial_config(settings, code, build_mapper(settings, code.field))
    main_simulate(cfg, args.trial, args.kind)
