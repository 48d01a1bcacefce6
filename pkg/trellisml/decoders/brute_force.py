# -*- coding: UTF-8 -*-

import logging

import numpy as np

from trellisml.channel import ReceivedSequence, SymbolMapper
from trellisml.convcode import GeneratorMatrix, Message, encode, state_indices
from trellisml.decoders.base import ComplexityStats, DecodeResult, check_received
from trellisml.exceptions import ResourceError
from trellisml.metrics import negative_sll

logger = logging.getLogger(__name__)

BRUTE_FORCE_BUDGET = 2 ** 20

_BATCH = 4096


def message_labels(first: int, count: int, Q: int, N: int) -> np.ndarray:
    """
    Labels of messages ``first .. first+count-1`` in lexicographic order, ``(count, N)``.
    """
    index = np.arange(first, first + count, dtype=np.int64)
    powers = Q ** np.arange(N - 1, -1, -1, dtype=np.int64)
    return (index[:, None] // powers[None, :]) % Q


def brute_force_ml(rx: ReceivedSequence, code: GeneratorMatrix, mapper: SymbolMapper, N: int,
                   budget: int = BRUTE_FORCE_BUDGET) -> DecodeResult:
    """
    Exhaustive minimiser of the negative SLL. Among equal metrics the
    lexicographically smallest message wins.

    :raise: ``ResourceError`` if ``q**(k*N)`` exceeds ``budget``
    """
    check_received(rx, code, N)
    Q = code.symbol_count
    total = Q ** N
    if total > budget:
        raise ResourceError("brute-force message space", total, budget)

    points = mapper(code.state_outputs)
    best_cost, best_index = np.inf, 0
    for first in range(0, total, _BATCH):
        count = min(_BATCH, total - first)
        states = state_indices(code, message_labels(first, count, Q, N))
        cost = ((rx.samples[None, :, :] - points[states]) ** 2).sum(axis=(1, 2))
        i = int(np.argmin(cost))
        if cost[i] < best_cost:
            best_cost, best_index = cost[i], first + i

    labels = message_labels(best_index, 1, Q, N)[0]
    msg = Message.from_indices(labels, code.field, code.k)
    metric = negative_sll(rx, encode(msg, code), mapper)
    span = N + code.nu - 1
    logger.debug("brute force: %d messages, metric=%.6g", total, metric)
    return DecodeResult(msg, metric, ComplexityStats(total * span, span, N), True)
