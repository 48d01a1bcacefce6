# -*- coding: UTF-8 -*-

"""
Sum-log-likelihood lower bounds: the branch bound of sphere decoding, the
Viterbi search pruned by it, and whole-codeword tests built on the minimum
signal-space distance between codewords.
"""

import heapq
import logging
import math
from typing import Optional

import numpy as np

from trellisml.channel import ReceivedSequence, SymbolMapper
from trellisml.convcode import Codeword, GeneratorMatrix, Message, Trellis, encode
from trellisml.decoders.base import DecodeResult, finish
from trellisml.decoders.viterbi import trellis_search
from trellisml.exceptions import ContractError, ResourceError
from trellisml.metrics import PathMetric, negative_sll, residuals

logger = logging.getLogger(__name__)

# Cap on the (time, state) nodes settled by the detour search.
DETOUR_BUDGET = 2 ** 22


def sphere_branch_lower_bound(rx: ReceivedSequence, partial: Message, code: GeneratorMatrix,
                              mapper: SymbolMapper, m: Optional[int] = None) -> PathMetric:
    """
    ``sum_{d=0}^{m} ||r[d] - g_q(y~[d])||**2`` where ``y~`` is encoded from the known
    prefix. It lower-bounds the negative SLL of every completion of the prefix.

    :param partial: the source symbols ``x[0 .. len(partial)-1]``
    :param m: last index of the sum; defaults to ``len(partial) - 1``. Larger values
        are only defined for a complete message, whose zero tail is then known.
    """
    N = rx.span - code.nu + 1
    if m is None:
        m = len(partial) - 1
    if m < 0:
        return 0.0
    if len(partial) > N:
        raise ContractError("prefix of length %d is longer than the block (%d)" % (len(partial), N))
    if m >= rx.span:
        raise ContractError("bound index %d is beyond the received span %d" % (m, rx.span))
    if m >= len(partial) and len(partial) < N:
        raise ContractError("indices past the prefix are unknown for an incomplete message")
    y = encode(partial, code)
    head = Codeword(y.symbols[:m + 1], code.field)
    samples = ReceivedSequence(rx.samples[:m + 1])
    return math.fsum(residuals(samples, head, mapper))


def sll_augmented_viterbi(rx: ReceivedSequence, trellis: Trellis, mapper: SymbolMapper,
                          guess: Message) -> DecodeResult:
    """
    Viterbi search that drops every state whose best prefix bound strictly exceeds
    the negative SLL of ``guess``. The ML path always stays below that threshold.
    """
    threshold = negative_sll(rx, encode(guess, trellis.code), mapper)
    found = trellis_search(rx, trellis, mapper, threshold=threshold)
    result = finish(rx, trellis, mapper, found.states, found.visited_states, True, guess=guess)
    logger.debug("sll-augmented viterbi: threshold=%.6g visited=%d", threshold, result.stats.visited_states)
    return result


def _state_weights(code: GeneratorMatrix, mapper: SymbolMapper) -> np.ndarray:
    table = np.array([mapper.difference_distance(v) for v in range(code.q)])
    return table[code.state_outputs].sum(axis=1)


def _detour_search(code: GeneratorMatrix, weights: np.ndarray, N: Optional[int]) -> float:
    """
    Least total weight of a path that leaves the zero state with a nonzero input
    and comes back to it. With ``N`` given the path must fit in a block of that
    length (inputs past ``N-1`` are zero).
    """
    Q, S = code.symbol_count, code.state_count
    horizon = None if N is None else N + code.nu - 1
    heap = [(float(weights[a]), 0, a) for a in range(1, Q)]
    heapq.heapify(heap)
    settled = set()
    while heap:
        cost, t, s = heapq.heappop(heap)
        if s == 0:
            return cost
        key = s if horizon is None else (t, s)
        if key in settled:
            continue
        settled.add(key)
        if len(settled) > DETOUR_BUDGET:
            raise ResourceError("detour search nodes", len(settled), DETOUR_BUDGET)
        inputs = Q if horizon is None or t + 1 < N else 1
        for a in range(inputs):
            nxt = (s * Q) % S + a
            if horizon is not None and t + 1 >= horizon:
                # beyond the span every state has flushed to zero
                nxt = 0
            heapq.heappush(heap, (cost + float(weights[nxt]), t + 1, nxt))
    raise ContractError("no detour returns to the zero state")


def codeword_distance_bound(code: GeneratorMatrix, N: int, mapper: SymbolMapper) -> float:
    """
    Lower bound on ``||g_q(y~) - g_q(y)||**2`` over distinct codewords of length ``N``:
    the least signal-space weight of a nonzero codeword, each symbol difference
    weighted by the smallest mapped distance it can produce.
    """
    if N < 1:
        raise ContractError("block length must be positive")
    return _detour_search(code, _state_weights(code, mapper), N)


def free_distance(code: GeneratorMatrix, N: Optional[int] = None) -> int:
    """
    Minimum number of nonzero codeword coordinates over nonzero codewords.
    """
    weights = (code.state_outputs != 0).sum(axis=1).astype(np.float64)
    return int(_detour_search(code, weights, N))


def whole_codeword_optimality_test(rx: ReceivedSequence, guess: Message, bound: float,
                                   mapper: SymbolMapper, code: GeneratorMatrix) -> bool:
    """
    Certify ``guess`` as the ML message using only the distance bound. Every other
    codeword is at least ``sqrt(bound)`` away from the guess, so its negative SLL is
    at least ``(sqrt(bound) - sqrt(S))**2`` with ``S`` the guess's own metric.

    :return: true if that lower bound strictly exceeds ``S``; false is inconclusive
    """
    metric = negative_sll(rx, encode(guess, code), mapper)
    radius = math.sqrt(bound) - math.sqrt(metric)
    lower = radius * radius if radius > 0 else 0.0
    return lower > metric
