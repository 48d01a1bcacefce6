# -*- coding: UTF-8 -*-

"""
Path metrics: the negative sum log-likelihood, branch metrics and the
path-covering predicate used to eliminate survivors.
"""

import math

import numpy as np

from trellisml.channel import ReceivedSequence, SymbolMapper
from trellisml.convcode import Codeword, GeneratorMatrix, state_indices
from trellisml.exceptions import ContractError

# Gaussian case: a sum of squared distances. Generic case: a negative log-likelihood.
PathMetric = float


def branch_metric(r_d, y_d, mapper: SymbolMapper) -> float:
    """
    ``||r[d] - g_q(y[d])||**2`` for one index.
    """
    r = np.asarray(r_d, dtype=np.float64).reshape(-1)
    s = mapper(np.asarray(y_d).reshape(-1))
    if r.shape != s.shape:
        raise ContractError("observation has dimension %d, symbol has %d" % (r.size, s.size))
    return math.fsum((r - s) ** 2)


def residuals(rx: ReceivedSequence, cw: Codeword, mapper: SymbolMapper) -> np.ndarray:
    """
    Per-index squared distances ``||r[d] - g_q(y[d])||**2``.
    """
    if rx.samples.shape != cw.symbols.shape:
        raise ContractError("received shape %s does not match codeword shape %s"
                            % (rx.samples.shape, cw.symbols.shape))
    return ((rx.samples - mapper(cw.symbols)) ** 2).sum(axis=1)


def negative_sll(rx: ReceivedSequence, cw: Codeword, mapper: SymbolMapper) -> PathMetric:
    return math.fsum(residuals(rx, cw, mapper))


class ScoredPath:
    """
    A state path with the log-likelihood contributed at every index
    (observation term plus transition term).
    """

    def __init__(self, states, loglik):
        self.states = np.asarray(states, dtype=np.int64)
        self.loglik = np.asarray(loglik, dtype=np.float64)
        if self.states.shape != self.loglik.shape or self.states.ndim != 1:
            raise ContractError("states and log-likelihoods must be 1-D of equal length")

    def __len__(self):
        return self.states.size

    @classmethod
    def gaussian(cls, rx: ReceivedSequence, code: GeneratorMatrix, mapper: SymbolMapper,
                 labels) -> "ScoredPath":
        """
        Path of a convolutional codeword under Gaussian noise. Uniform transitions
        drop out, so the per-index log-likelihood is the negative branch metric.

        :param labels: source symbol labels ``x[0 .. N-1]``
        """
        states = state_indices(code, labels)
        cw = Codeword(code.state_outputs[states], code.field)
        return cls(states, -residuals(rx, cw, mapper))


def _state_at(path: ScoredPath, d: int) -> int:
    if d < 0 or d >= len(path):
        return 0
    return int(path.states[d])


def covers(path_a: ScoredPath, path_b: ScoredPath, d1: int, d2: int) -> bool:
    """
    Whether ``path_a`` covers ``path_b`` on ``(d1, d2]``: both share their states at
    ``d1`` and ``d2`` and the log-likelihood ratio of ``path_b`` against ``path_a``
    summed over the interval is strictly negative. A true result certifies that
    ``path_b`` is not the ML path.

    :param d1: left end, ``-1`` for the common zero origin
    :param d2: right end, inclusive
    :raise: ``ContractError`` if the end states differ or ``d1 >= d2``
    """
    if d1 >= d2:
        raise ContractError("cover interval needs d1 < d2, got (%d, %d]" % (d1, d2))
    if d2 >= len(path_a) or d2 >= len(path_b):
        raise ContractError("cover interval ends beyond the paths")
    if _state_at(path_a, d1) != _state_at(path_b, d1) or _state_at(path_a, d2) != _state_at(path_b, d2):
        raise ContractError("paths do not share their states at %d and %d" % (d1, d2))
    lo = d1 + 1
    ratio = math.fsum(path_b.loglik[lo:d2 + 1] - path_a.loglik[lo:d2 + 1])
    return ratio < 0
