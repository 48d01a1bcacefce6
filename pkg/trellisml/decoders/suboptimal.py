# -*- coding: UTF-8 -*-

"""
First-pass decoders with no optimality guarantee: decision feedback and a
breadth-first list (beam) search.
"""

import logging
import re
from typing import Optional, Tuple

import numpy as np

from trellisml.channel import ReceivedSequence, SymbolMapper
from trellisml.convcode import GeneratorMatrix, Message
from trellisml.decoders.base import branch_table, check_received
from trellisml.exceptions import ConfigurationError

logger = logging.getLogger(__name__)

STRATEGIES = ("decision_feedback", "list")

_LIST_PATTERN = re.compile(r"^list\((\d+)\)$")


def parse_strategy(text: str, list_size: Optional[int] = None) -> Tuple[str, int]:
    """
    Accepts ``decision_feedback``, ``list`` (with ``list_size``) or ``list(L)``.
    """
    text = text.strip().replace("-", "_")
    match = _LIST_PATTERN.match(text)
    if match:
        name, size = "list", int(match.group(1))
    elif text in STRATEGIES:
        name, size = text, (list_size if list_size is not None else 1)
    else:
        raise ConfigurationError("unknown strategy %r, expected one of %s or list(L)"
                                 % (text, ", ".join(STRATEGIES)), key="strategy")
    if name == "list" and size < 1:
        raise ConfigurationError("list size must be at least 1", key="list_size")
    return name, size


def check_decision_feedback(code: GeneratorMatrix) -> None:
    rank = code.field.rank(code.taps[0])
    if rank != code.k:
        raise ConfigurationError("decision feedback needs G[0] of full row rank %d, got rank %d; "
                                 "use the list strategy instead" % (code.k, rank), key="strategy")


def _decision_feedback(rx: ReceivedSequence, code: GeneratorMatrix, mapper: SymbolMapper, N: int):
    check_decision_feedback(code)
    cost = branch_table(rx, code, mapper)
    Q, S = code.symbol_count, code.state_count
    labels = np.zeros(N, dtype=np.int64)
    state = 0
    for d in range(N):
        options = (state * Q) % S + np.arange(Q)
        a = int(np.argmin(cost(d)[options]))
        labels[d] = a
        state = int(options[a])
    return labels, N


def _list_search(rx: ReceivedSequence, code: GeneratorMatrix, mapper: SymbolMapper, N: int, size: int):
    cost = branch_table(rx, code, mapper)
    Q, S = code.symbol_count, code.state_count
    span = N + code.nu - 1

    metric = np.zeros(1)
    states = np.zeros(1, dtype=np.int64)
    lexrank = np.zeros(1, dtype=np.int64)
    parents, symbols = [], []
    visits = 0
    for d in range(N):
        branch = cost(d)
        nxt = ((states[:, None] * Q) % S + np.arange(Q)[None, :]).ravel()
        parent = np.repeat(np.arange(states.size), Q)
        sym = np.tile(np.arange(Q), states.size)
        total = np.repeat(metric, Q) + branch[nxt]

        # best metric first, then the lexicographically smaller prefix
        order = np.lexsort((sym, lexrank[parent], total))
        _, first = np.unique(nxt[order], return_index=True)
        keep = order[np.sort(first)][:size]

        order = np.lexsort((sym[keep], lexrank[parent[keep]]))
        lexrank = np.empty(keep.size, dtype=np.int64)
        lexrank[order] = np.arange(keep.size)
        metric, states = total[keep], nxt[keep]
        parents.append(parent[keep])
        symbols.append(sym[keep])
        visits += keep.size

    for d in range(N, span):
        states = (states * Q) % S
        metric = metric + cost(d)[states]
        visits += states.size

    i = int(np.lexsort((lexrank, metric))[0])
    labels = np.zeros(N, dtype=np.int64)
    for d in range(N - 1, -1, -1):
        labels[d] = symbols[d][i]
        i = int(parents[d][i])
    return labels, visits


def run_suboptimal(rx: ReceivedSequence, code: GeneratorMatrix, mapper: SymbolMapper, N: int,
                   strategy: str = "decision_feedback", list_size: Optional[int] = None):
    """
    :return: ``(labels, visited_states)`` of the chosen strategy
    """
    check_received(rx, code, N)
    name, size = parse_strategy(strategy, list_size)
    if name == "decision_feedback":
        return _decision_feedback(rx, code, mapper, N)
    return _list_search(rx, code, mapper, N, size)


def suboptimal_decode(rx: ReceivedSequence, code: GeneratorMatrix, mapper: SymbolMapper, N: int,
                      strategy: str = "decision_feedback", list_size: Optional[int] = None) -> Message:
    labels, _ = run_suboptimal(rx, code, mapper, N, strategy, list_size)
    return Message.from_indices(labels, code.field, code.k)
