# -*- coding: UTF-8 -*-

import logging
from typing import Optional

from trellisml.channel import ReceivedSequence, SymbolMapper
from trellisml.convcode import GeneratorMatrix, Message, Trellis
from trellisml.decoders.base import DecodeResult
from trellisml.decoders.nll import NllParams, build_symbol_sets
from trellisml.decoders.suboptimal import run_suboptimal
from trellisml.decoders.viterbi import modified_viterbi

logger = logging.getLogger(__name__)


def three_step_decode(rx: ReceivedSequence, code: GeneratorMatrix, mapper: SymbolMapper, params: NllParams,
                      strategy: str = "decision_feedback", list_size: Optional[int] = None,
                      trellis: Optional[Trellis] = None, guess: Optional[Message] = None) -> DecodeResult:
    """
    Suboptimal guess, symbol confirmation, then Viterbi over the unconfirmed symbols.

    ``stats.visited_states`` counts the third step only. ``stats.stage_costs`` holds
    the per-index cost of every step.

    :param trellis: reused when given, built for ``rx`` otherwise
    :param guess: skips the first step (e.g. the transmitted message in experiments)
    """
    N = rx.span - code.nu + 1
    if trellis is None:
        trellis = Trellis(code, N)

    sub_visits = 0
    if guess is None:
        labels, sub_visits = run_suboptimal(rx, code, mapper, N, strategy, list_size)
        guess = Message.from_indices(labels, code.field, code.k)

    sets = build_symbol_sets(rx, guess, params, code, mapper)
    result = modified_viterbi(rx, trellis, mapper, sets)
    result.guess = guess
    result.stats.stage_costs = {
        "suboptimal": sub_visits / N,
        "confirmation": (N + code.nu - 1) / N,
        "modified_viterbi": result.stats.normalized,
    }
    logger.debug("three-step: %.1f%% confirmed, C_mva=%.4g",
                 100 * sets.singleton_fraction, result.stats.normalized)
    return result
