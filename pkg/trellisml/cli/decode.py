# -*- coding: UTF-8 -*-

import argparse
from typing import List, Optional

import numpy as np

from trellisml.channel import ReceivedSequence, SymbolMapper
from trellisml.cli import CHANNEL_FLAGS, CODE_FLAGS, NLL_FLAGS, add_setting_flags, settings_from
from trellisml.cli.encode import read_values
from trellisml.config import build_code, build_hmm_system, build_mapper, nll_overrides, snr_grid
from trellisml.convcode import GeneratorMatrix, Message, Trellis
from trellisml.decoders import (NllParams, brute_force_ml, sll_augmented_viterbi, suboptimal_decode,
                                three_step_decode, viterbi_decode)
from trellisml.exceptions import UsageError
from trellisml.hmm import gaussian_conv_system, hmm_viterbi

DECODER_CHOICES = ("viterbi", "three_step", "sll_viterbi", "brute_force", "suboptimal", "hmm_viterbi")


def _print_result(result):
    print("message: %s" % ",".join(str(v) for v in result.message.symbols.reshape(-1)))
    print("metric: %.9g" % result.metric)
    print("visited: %d (%.4g per index)" % (result.stats.visited_states, result.stats.normalized))
    for stage, cost in sorted(result.stats.stage_costs.items()):
        print("  %s: %.4g per index" % (stage, cost))
    print("certified: %s" % ("yes" if result.certified_ml else "no"))


def main_decode(code: GeneratorMatrix, mapper: SymbolMapper, samples: List[float], decoder: str,
                params: Optional[NllParams] = None, strategy: str = "decision_feedback",
                guess: Optional[List[int]] = None, snr: Optional[float] = None, hmm=None):
    if len(samples) % code.n:
        raise UsageError("got %d received values, not a multiple of n=%d" % (len(samples), code.n))
    rx = ReceivedSequence(np.array(samples).reshape(-1, code.n))
    N = rx.span - code.nu + 1
    if N < 1:
        raise UsageError("need at least %d received symbols" % code.nu)

    if decoder == "suboptimal":
        msg = suboptimal_decode(rx, code, mapper, N, strategy)
        print("message: %s" % ",".join(str(v) for v in msg.symbols.reshape(-1)))
        return
    if decoder == "hmm_viterbi":
        system = hmm if hmm is not None else gaussian_conv_system(code, mapper, snr)
        states, stats = hmm_viterbi(system, rx)
        print("states: %s" % ",".join(str(s) for s in states.states))
        print("visited: %d (%.4g per index)" % (stats.visited_states, stats.normalized))
        return

    trellis = Trellis(code, N)
    if decoder == "viterbi":
        result = viterbi_decode(rx, trellis, mapper)
    elif decoder == "brute_force":
        result = brute_force_ml(rx, code, mapper, N)
    elif decoder == "three_step":
        result = three_step_decode(rx, code, mapper, params, strategy=strategy, trellis=trellis)
    else:
        if guess is None:
            guess_msg = suboptimal_decode(rx, code, mapper, N, strategy)
        else:
            guess_msg = Message(np.array(guess, dtype=np.int64).reshape(-1, code.k), code.field)
        result = sll_augmented_viterbi(rx, trellis, mapper, guess_msg)
    _print_result(result)


def register(subparsers) -> argparse.ArgumentParser:
    parser = subparsers.add_parser("decode", help="decode received samples",
                                   description="Decode real received samples (row-major, n per index)")
    add_setting_flags(parser, CODE_FLAGS + CHANNEL_FLAGS + NLL_FLAGS + ["strategy"])
    parser.add_argument("--rx", "-r", help="comma-separated received samples")
    parser.add_argument("--file", "-f", help="file with one received sample per line")
    parser.add_argument("--decoder", "-d", choices=DECODER_CHOICES, default="viterbi", help="decoder to run")
    parser.add_argument("--guess", help="guess message for sll_viterbi (defaults to the suboptimal decoder)")
    return parser


def run(args: argparse.Namespace):
    settings = settings_from(args)
    code = build_code(settings)
    mapper = build_mapper(settings, code.field)
    params = NllParams.for_code(code, mapper, **nll_overrides(settings))
    snr = None
    hmm = None
    if args.decoder == "hmm_viterbi":
        snr = snr_grid(settings)[0]
        if settings.sections["hmm"]:
            hmm = build_hmm_system(settings, mapper, snr)
    main_decode(
        code=code,
        mapper=mapper,
        samples=read_values(args.rx, args.file, float),
        decoder=args.decoder,
        params=params,
        strategy=settings.get("sweep", "strategy", "decision_feedback"),
        guess=None if args.guess is None else read_values(args.guess, None, int),
        snr=snr,
        hmm=hmm,
    )
