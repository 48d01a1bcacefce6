# -*- coding: UTF-8 -*-

"""
Viterbi decoding on the code trellis: the full search, and the modified search
that only expands states whose source symbols lie in a symbol set sequence.
"""

import logging
from typing import Callable, Optional

import numpy as np

from trellisml.channel import ReceivedSequence, SymbolMapper
from trellisml.convcode import Trellis
from trellisml.decoders.base import DecodeResult, SymbolSetSequence, branch_table, check_received, finish
from trellisml.exceptions import ContractError
from trellisml.survivors import SearchResult, search

logger = logging.getLogger(__name__)


def trellis_search(rx: ReceivedSequence, trellis: Trellis, mapper: SymbolMapper,
                   allowed: Optional[Callable[[int], np.ndarray]] = None,
                   threshold: Optional[float] = None) -> SearchResult:
    check_received(rx, trellis.code, trellis.N)
    mask = trellis.reachable if allowed is None else allowed
    return search(trellis.span, trellis.predecessors, branch_table(rx, trellis.code, mapper),
                  np.zeros(trellis.num_states), mask, threshold=threshold)


def viterbi_decode(rx: ReceivedSequence, trellis: Trellis, mapper: SymbolMapper) -> DecodeResult:
    """
    Exact ML decoding. Every reachable state of every index is expanded.
    """
    found = trellis_search(rx, trellis, mapper)
    result = finish(rx, trellis, mapper, found.states, found.visited_states, True)
    logger.debug("viterbi: N=%d metric=%.6g visited=%d", trellis.N, result.metric, result.stats.visited_states)
    return result


def symbol_set_mask(trellis: Trellis, sets: SymbolSetSequence) -> Callable[[int], np.ndarray]:
    """
    ``d -> mask`` of reachable states whose every in-range source symbol is admissible.
    """
    if len(sets) != trellis.N:
        raise ContractError("symbol sets cover %d indices, block has %d" % (len(sets), trellis.N))
    if sets.alphabet_size != trellis.code.symbol_count:
        raise ContractError("symbol sets use %d labels, code has %d" % (sets.alphabet_size, trellis.code.symbol_count))
    digits = trellis.code.state_digits
    nu = trellis.code.nu

    def allowed(d: int) -> np.ndarray:
        mask = trellis.reachable(d).copy()
        for i in range(nu):
            t = d - nu + 1 + i
            if 0 <= t < trellis.N and sets.confirmed[t] != SymbolSetSequence.FULL:
                mask &= digits[:, i] == sets.confirmed[t]
        return mask

    return allowed


def modified_viterbi(rx: ReceivedSequence, trellis: Trellis, mapper: SymbolMapper,
                     sets: SymbolSetSequence) -> DecodeResult:
    """
    Viterbi search restricted to states whose source symbols belong to ``sets``.

    :raise: ``ContractError`` if the sets leave no admissible state at some index
    """
    found = trellis_search(rx, trellis, mapper, allowed=symbol_set_mask(trellis, sets))
    return finish(rx, trellis, mapper, found.states, found.visited_states, True, symbol_sets=sets)
