# -*- coding: UTF-8 -*-

"""
Neighbouring log-likelihood test: certifies the source symbols of a candidate
on ``[m, m+nu)`` from the observations in a fixed window around ``m``.

The inner window ``[m - 2M*nu, m + 2M*nu)`` must keep every residual small and
the two flanks of ``nu`` indices on either side must keep their summed squared
residuals within ``M*xi - nu*d_max2``.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from trellisml.channel import ReceivedSequence, SymbolMapper, signal_distances
from trellisml.convcode import Codeword, GeneratorMatrix, Message, encode
from trellisml.decoders.base import SymbolSetSequence
from trellisml.exceptions import ConfigurationError, ContractError
from trellisml.metrics import residuals

logger = logging.getLogger(__name__)

CONDITION_MODES = ("literal", "squared", "scaled")
BOUNDARY_MODES = ("clip", "extend")


def window_multiplier(nu: int, d_max2: float, xi: float) -> int:
    """
    Smallest ``M`` with ``M > nu*d_max2/xi``, i.e. a positive flank budget.
    """
    return int(math.floor(nu * d_max2 / xi)) + 1


@dataclass(frozen=True)
class NllParams:
    xi: float
    M: int
    d_min2: float
    d_max2: float
    nu: int
    condition_a: str = "literal"
    boundary: str = "clip"

    def __post_init__(self):
        if not 0 < self.xi < self.d_min2 / 2:
            raise ConfigurationError("need 0 < xi < d_min2/2 = %g, got %g" % (self.d_min2 / 2, self.xi), key="xi")
        if int(self.M) != self.M or not self.M > self.nu * self.d_max2 / (3 * self.xi):
            raise ConfigurationError("need an integer M > nu*d_max2/(3*xi) = %g, got %r"
                                     % (self.nu * self.d_max2 / (3 * self.xi), self.M), key="M")
        if self.nu < 1:
            raise ConfigurationError("nu must be positive", key="nu")
        if self.condition_a not in CONDITION_MODES:
            raise ConfigurationError("unknown condition mode %r" % self.condition_a, key="condition_a")
        if self.boundary not in BOUNDARY_MODES:
            raise ConfigurationError("unknown boundary mode %r" % self.boundary, key="boundary")

    @classmethod
    def default(cls, d_min2: float, d_max2: float, nu: int, **kw) -> "NllParams":
        """
        ``xi = d_min2/4`` and the smallest ``M`` that is at least
        ``ceil(4*nu*d_max2/(3*d_min2))`` and leaves a positive flank budget.
        """
        xi = kw.pop("xi", None)
        if xi is None:
            xi = d_min2 / 4
        M = kw.pop("M", None)
        if M is None and xi <= 0:
            M = 1
        elif M is None:
            M = max(int(math.ceil(4 * nu * d_max2 / (3 * d_min2))), window_multiplier(nu, d_max2, xi))
        return cls(xi, M, d_min2, d_max2, nu, **kw)

    @classmethod
    def for_code(cls, code: GeneratorMatrix, mapper: SymbolMapper, **kw) -> "NllParams":
        d_min2, d_max2 = signal_distances(mapper, code.n)
        return cls.default(d_min2, d_max2, code.nu, **kw)

    def with_modes(self, condition_a: Optional[str] = None, boundary: Optional[str] = None) -> "NllParams":
        return replace(self, condition_a=condition_a or self.condition_a, boundary=boundary or self.boundary)

    @property
    def inner(self) -> int:
        return 2 * self.M * self.nu

    @property
    def reach(self) -> int:
        return (2 * self.M + 1) * self.nu

    @property
    def flank_budget(self) -> float:
        return self.M * self.xi - self.nu * self.d_max2

    def residual_ok(self, squared) -> np.ndarray:
        """
        Condition (a) on squared residuals ``||r[d] - g_q(y[d])||**2``.
        """
        squared = np.asarray(squared, dtype=np.float64)
        if self.condition_a == "squared":
            return squared < self.d_min2 / 2 - self.xi
        norm = np.sqrt(squared)
        if self.condition_a == "literal":
            return norm < self.d_min2 / 2 - self.xi
        d_min = math.sqrt(self.d_min2)
        return d_min * (d_min - 2 * norm) > 2 * self.xi


def nll_confirm(rx: ReceivedSequence, candidate: Codeword, m: int, params: NllParams,
                mapper: SymbolMapper) -> bool:
    """
    Whether the candidate's source symbols on ``[m, m+nu)`` are certified ML.

    With ``boundary = "clip"`` a window leaving ``[0, span)`` is unconfirmed; with
    ``"extend"`` the missing indices count as noiseless zero symbols.
    """
    res = residuals(rx, candidate, mapper)
    span = res.size
    lo, hi = m - params.reach, m + params.reach
    if params.boundary == "clip" and (lo < 0 or hi > span):
        return False

    def window(a: int, b: int) -> np.ndarray:
        a, b = max(a, 0), min(b, span)
        return res[a:b] if a < b else res[:0]

    inner = window(m - params.inner, m + params.inner)
    if not params.residual_ok(inner).all():
        return False
    left = window(lo, m - params.inner)
    right = window(m + params.inner, hi)
    budget = params.flank_budget
    return math.fsum(left) <= budget and math.fsum(right) <= budget


def confirmed_windows(rx: ReceivedSequence, candidate: Codeword, params: NllParams,
                      mapper: SymbolMapper, first: int, last: int) -> np.ndarray:
    """
    ``nll_confirm`` for every ``m`` in ``[first, last]`` from running sums, so the
    whole sweep costs time linear in the span.
    """
    res = residuals(rx, candidate, mapper)
    span = res.size
    offset = params.reach - first
    size = last - first + 2 * params.reach + 1
    index = np.arange(size) - offset
    inside = (index >= 0) & (index < span)
    padded = np.zeros(size)
    padded[inside] = res[index[inside]]

    fails = ~params.residual_ok(padded)
    missing = ~inside if params.boundary == "clip" else np.zeros(size, dtype=bool)
    bad = np.concatenate(([0], np.cumsum(fails | missing)))
    absent = np.concatenate(([0], np.cumsum(missing)))
    energy = np.concatenate(([0.0], np.cumsum(padded)))

    m = np.arange(first, last + 1) + offset
    inner_bad = bad[m + params.inner] - bad[m - params.inner]
    left_sum = energy[m - params.inner] - energy[m - params.reach]
    right_sum = energy[m + params.reach] - energy[m + params.inner]
    left_absent = absent[m - params.inner] - absent[m - params.reach]
    right_absent = absent[m + params.reach] - absent[m + params.inner]
    budget = params.flank_budget
    return (inner_bad == 0) & (left_absent == 0) & (right_absent == 0) \
        & (left_sum <= budget) & (right_sum <= budget)


def build_symbol_sets(rx: ReceivedSequence, guess: Message, params: NllParams, code: GeneratorMatrix,
                      mapper: SymbolMapper) -> SymbolSetSequence:
    """
    ``X[d] = {guess[d]}`` when some confirmed window covers ``d``, the full alphabet otherwise.
    """
    if params.nu != code.nu:
        raise ContractError("params were built for nu=%d, code has nu=%d" % (params.nu, code.nu))
    N = guess.N
    candidate = encode(guess, code)
    first, last = -code.nu + 1, N - 1
    ok = confirmed_windows(rx, candidate, params, mapper, first, last)

    # window m certifies [m, m+nu); mark through a difference array over [0, N)
    starts = np.flatnonzero(ok) + first
    cover = np.zeros(N + 1, dtype=np.int64)
    np.add.at(cover, np.clip(starts, 0, N), 1)
    np.add.at(cover, np.clip(starts + code.nu, 0, N), -1)
    confirmed = np.cumsum(cover[:N]) > 0

    labels = np.where(confirmed, guess.indices(), SymbolSetSequence.FULL)
    sets = SymbolSetSequence(labels, code.symbol_count)
    logger.debug("symbol sets: %d of %d indices confirmed", int(confirmed.sum()), N)
    return sets
