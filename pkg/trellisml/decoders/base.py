# -*- coding: UTF-8 -*-

from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np

from trellisml.channel import ReceivedSequence, SymbolMapper
from trellisml.convcode import GeneratorMatrix, Message, Trellis, encode
from trellisml.exceptions import ContractError
from trellisml.metrics import PathMetric, negative_sll


@dataclass
class ComplexityStats:
    """
    Visited Markov states of one decode. ``normalized`` is per source index.
    """
    visited_states: int
    time_span: int
    N: int
    stage_costs: Dict[str, float] = field(default_factory=dict)

    @property
    def normalized(self) -> float:
        return self.visited_states / self.N


class SymbolSetSequence:
    """
    Admissible source symbols per index: ``confirmed[d]`` is a symbol label when
    ``X[d]`` is a singleton and ``-1`` when it is the full alphabet.
    """

    FULL = -1

    def __init__(self, confirmed, alphabet_size: int):
        self.confirmed = np.asarray(confirmed, dtype=np.int64)
        self.alphabet_size = alphabet_size
        if self.confirmed.ndim != 1:
            raise ContractError("symbol sets must be indexed by time")
        if np.any(self.confirmed >= alphabet_size) or np.any(self.confirmed < self.FULL):
            raise ContractError("confirmed symbols must be labels in [0, %d)" % alphabet_size)

    @classmethod
    def full(cls, N: int, alphabet_size: int) -> "SymbolSetSequence":
        return cls(np.full(N, cls.FULL), alphabet_size)

    def __len__(self):
        return self.confirmed.size

    def is_singleton(self, d: int) -> bool:
        return self.confirmed[d] != self.FULL

    def symbols(self, d: int):
        if self.is_singleton(d):
            return {int(self.confirmed[d])}
        return set(range(self.alphabet_size))

    @property
    def singleton_fraction(self) -> float:
        if not len(self):
            return 0.0
        return float(np.mean(self.confirmed != self.FULL))


@dataclass
class DecodeResult:
    message: Message
    metric: PathMetric
    stats: ComplexityStats
    certified_ml: bool
    guess: Optional[Message] = None
    symbol_sets: Optional[SymbolSetSequence] = None


def check_received(rx: ReceivedSequence, code: GeneratorMatrix, N: int) -> None:
    span = N + code.nu - 1
    if rx.span != span or rx.n != code.n:
        raise ContractError("received sequence is %d x %d, expected %d x %d"
                            % (rx.span, rx.n, span, code.n))


def branch_table(rx: ReceivedSequence, code: GeneratorMatrix, mapper: SymbolMapper):
    """
    ``d -> (S,)`` branch metrics of every state at index ``d``.
    """
    points = mapper(code.state_outputs)

    def cost(d: int) -> np.ndarray:
        return ((rx.samples[d] - points) ** 2).sum(axis=1)

    return cost


def finish(rx: ReceivedSequence, trellis: Trellis, mapper: SymbolMapper, states: np.ndarray,
           visited: int, certified: bool, **extra) -> DecodeResult:
    """
    Turn a state path into a result; the metric is recomputed from the codeword.
    """
    code = trellis.code
    labels = np.asarray(states[:trellis.N], dtype=np.int64) % code.symbol_count
    msg = Message.from_indices(labels, code.field, code.k)
    metric = negative_sll(rx, encode(msg, code), mapper)
    stats = ComplexityStats(int(visited), trellis.span, trellis.N)
    return DecodeResult(msg, metric, stats, certified, **extra)
