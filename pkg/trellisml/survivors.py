# -*- coding: UTF-8 -*-

"""
Add-compare-select over a time-indexed state graph, with survivor memory and
traceback. Both the convolutional decoders and the generic HMM decoder run on
top of :func:`search`.

Costs are minimised. Ties between equal survivors go to the lexicographically
smaller state sequence, which for shift-register states is the lexicographically
smaller message.
"""

import logging
from typing import Callable, Optional

import numpy as np

from trellisml.exceptions import ContractError

logger = logging.getLogger(__name__)

# Extra room granted to threshold pruning so that summation order cannot drop
# a path whose cost equals the threshold.
PRUNE_SLACK = 1e-9


class SurvivorMemory:
    """
    Back pointers ``prev[d, s]``: the state at ``d-1`` on the survivor into ``s`` at ``d``.
    The state before ``d = 0`` is the zero origin.
    """

    def __init__(self, span: int, num_states: int):
        self.prev = np.zeros((span, num_states), dtype=np.int64)

    def _before(self, d: int, s: int) -> int:
        return int(self.prev[d, s]) if d > 0 else 0

    def prefers(self, d: int, a: int, b: int) -> bool:
        """
        Whether the survivor into ``a`` at ``d`` is lexicographically smaller than the
        one into ``b``. Walks both back to where they merge and compares the first
        states that differ.
        """
        if a == b:
            return False
        while True:
            pa, pb = self._before(d, a), self._before(d, b)
            if pa == pb:
                return a < b
            a, b, d = pa, pb, d - 1

    def traceback(self, d: int, s: int) -> np.ndarray:
        states = np.zeros(d + 1, dtype=np.int64)
        for t in range(d, -1, -1):
            states[t] = s
            s = self._before(t, s)
        return states


class SearchResult:
    def __init__(self, states: np.ndarray, cost: float, visited: np.ndarray):
        self.states = states
        self.cost = cost
        self.visited = visited

    @property
    def visited_states(self) -> int:
        return int(self.visited.sum())


def _pick(memory: SurvivorMemory, d: int, candidates) -> int:
    best = int(candidates[0])
    for c in candidates[1:]:
        if memory.prefers(d, int(c), best):
            best = int(c)
    return best


def search(span: int,
           predecessors: np.ndarray,
           branch_cost: Callable[[int], np.ndarray],
           initial_cost: np.ndarray,
           allowed: Callable[[int], np.ndarray],
           transition_cost: Optional[np.ndarray] = None,
           final_cost: Optional[np.ndarray] = None,
           threshold: Optional[float] = None) -> SearchResult:
    """
    Minimum-cost state path over ``d`` in ``[0, span)``.

    :param predecessors: ``(S, P)`` candidate previous states for every state
    :param branch_cost: ``d -> (S,)`` cost of occupying each state at ``d``
    :param initial_cost: ``(S,)`` cost of leaving the origin into each state at ``d = 0``
    :param allowed: ``d -> (S,)`` boolean mask of states that may be expanded
    :param transition_cost: optional ``(S, P)`` cost added per predecessor (``inf`` forbids)
    :param final_cost: optional ``(S,)`` cost added when a path ends in a state
    :param threshold: states whose accumulated cost exceeds it are not expanded
    :raise: ``ContractError`` if no state survives at some index
    """
    num_states = predecessors.shape[0]
    rows = np.arange(num_states)
    memory = SurvivorMemory(span, num_states)
    visited = np.zeros(span, dtype=np.int64)
    limit = None if threshold is None else threshold + PRUNE_SLACK * max(1.0, abs(threshold))

    metric = np.where(allowed(0), initial_cost + branch_cost(0), np.inf)
    for d in range(span):
        if d > 0:
            candidates = metric[predecessors]
            if transition_cost is not None:
                candidates = candidates + transition_cost
            choice = np.argmin(candidates, axis=1)
            best = candidates[rows, choice]
            memory.prev[d] = predecessors[rows, choice]

            mask = allowed(d) & np.isfinite(best)
            tied = mask & ((candidates == best[:, None]).sum(axis=1) > 1)
            for s in np.flatnonzero(tied):
                options = predecessors[s, candidates[s] == best[s]]
                memory.prev[d, s] = _pick(memory, d - 1, options)

            metric = np.where(mask, best + branch_cost(d), np.inf)
        if limit is not None:
            metric[metric > limit] = np.inf
        alive = np.isfinite(metric)
        visited[d] = alive.sum()
        if not visited[d]:
            raise ContractError("no state survives at index %d" % d)

    closing = metric if final_cost is None else metric + final_cost
    low = closing.min()
    if not np.isfinite(low):
        raise ContractError("no path reaches an admissible final state")
    end = _pick(memory, span - 1, np.flatnonzero(closing == low))
    logger.debug("search over %d indices kept %d states, cost %.6g", span, visited.sum(), low)
    return SearchResult(memory.traceback(span - 1, end), float(low), visited)
