# -*- coding: UTF-8 -*-

"""
Maximum-likelihood sequence detection for a generic first-order hidden Markov
system, and the neighbouring log-likelihood test with pluggable bound functions.

A system is given by its log transition matrix (``-inf`` forbids a transition),
the processed symbol ``y(u)`` of every state, an observation log-density and the
two bound functions ``L_l``/``L_u``. Sequences start after the zero state.

Observation densities and bounds are evaluated on batches: ``f(r, ys)`` takes one
observation ``r`` of shape ``(n,)`` and processed symbols ``ys`` of shape ``(K, n)``
and returns ``(K,)`` values.
"""

import itertools
import logging
import math
from typing import Callable, Optional, Tuple

import numpy as np

from trellisml.channel import ReceivedSequence, SymbolMapper, signal_distances
from trellisml.convcode import GeneratorMatrix
from trellisml.decoders.base import ComplexityStats
from trellisml.decoders.nll import BOUNDARY_MODES, window_multiplier
from trellisml.exceptions import ConfigurationError, ContractError, ResourceError
from trellisml.survivors import search

logger = logging.getLogger(__name__)

BatchFunction = Callable[[np.ndarray, np.ndarray], np.ndarray]

# Largest number of state pairs held by the observability search.
PAIR_BUDGET = 2 ** 20

# Largest number of valid sequences the brute-force search walks.
SEQUENCE_BUDGET = 2 ** 16

ORDER_CAP = 64


class StateSequence:
    """
    States ``u[0 .. L-1]``; states outside that range are zero.
    """

    def __init__(self, states):
        self.states = np.asarray(states, dtype=np.int64).reshape(-1)

    def __len__(self):
        return self.states.size

    def __eq__(self, other):
        return isinstance(other, StateSequence) and np.array_equal(other.states, self.states)

    def __getitem__(self, d):
        if d < 0 or d >= len(self):
            return 0
        return int(self.states[d])

    def __repr__(self):
        return "StateSequence(%s)" % self.states.tolist()


class HmmSystem:

    def __init__(self, log_transition, outputs, obs_logdensity: BatchFunction,
                 bound_l: BatchFunction, bound_u: BatchFunction,
                 alphabet=None, terminate_at_zero: bool = False, snr: Optional[float] = None,
                 nu: Optional[int] = None):
        """
        :param log_transition: ``(S, S)`` array, ``[previous, next]``
        :param outputs: ``(S, n)`` processed symbol of every state
        :param obs_logdensity: ``log f_o(r | y)``
        :param bound_l: lower bound function ``L_l(r, y)``
        :param bound_u: upper bound function ``L_u(r, y)``
        :param alphabet: every processed symbol the bounds must hold against;
            defaults to the distinct rows of ``outputs``
        :param terminate_at_zero: sequences must be able to step into the zero state
            after their last index
        :param snr: signal to noise ratio the density is built for, if any
        :param nu: shared order; computed from the chain when omitted
        """
        log_p = np.array(log_transition, dtype=np.float64)
        if log_p.ndim != 2 or log_p.shape[0] != log_p.shape[1]:
            raise ConfigurationError("transition table must be square", key="transitions")
        if np.any(log_p > 1e-12):
            raise ConfigurationError("log transition probabilities must be <= 0", key="transitions")
        row_sums = np.exp(log_p).sum(axis=1)
        if np.any(np.abs(row_sums - 1.0) > 1e-9):
            raise ConfigurationError("every transition row must sum to 1", key="transitions")
        out = np.array(outputs, dtype=np.int64)
        if out.ndim == 1:
            out = out.reshape(-1, 1)
        if out.shape[0] != log_p.shape[0]:
            raise ConfigurationError("need one processed symbol per state", key="process")

        self.log_transition = log_p
        self.outputs = out
        self.obs_logdensity = obs_logdensity
        self.bound_l = bound_l
        self.bound_u = bound_u
        self.alphabet = np.unique(out, axis=0) if alphabet is None else np.asarray(alphabet, dtype=np.int64)
        self.terminate_at_zero = terminate_at_zero
        self.snr = snr
        self._nu = nu
        self._symbols, self._symbol_of_state = np.unique(out, axis=0, return_inverse=True)
        self._symbol_of_state = self._symbol_of_state.reshape(-1)

    @property
    def num_states(self) -> int:
        return self.log_transition.shape[0]

    @property
    def n(self) -> int:
        return self.outputs.shape[1]

    @property
    def allowed(self) -> np.ndarray:
        return np.isfinite(self.log_transition)

    @property
    def nu(self) -> int:
        """
        ``max(homogeneity order, observability order)``.
        """
        if self._nu is None:
            self._nu = max(homogeneity_order(self), observability_order(self))
        return self._nu

    @classmethod
    def from_tables(cls, transitions, process, mapper: SymbolMapper, snr: float,
                    terminate_at_zero: bool = False) -> "HmmSystem":
        """
        Gaussian observations ``r = g_q(y(u)) + noise`` over explicit tables.

        :param transitions: ``(S, S)`` transition probabilities
        :param process: ``(S, n)`` processed symbols over GF(q)
        """
        probs = np.array(transitions, dtype=np.float64)
        if np.any(probs < 0):
            raise ConfigurationError("transition probabilities must be >= 0", key="transitions")
        with np.errstate(divide="ignore"):
            log_p = np.log(probs)
        out = np.array(process, dtype=np.int64)
        if out.ndim == 1:
            out = out.reshape(-1, 1)
        density, low, high, alphabet = _gaussian_family(mapper, out.shape[1], snr)
        return cls(log_p, out, density, low, high, alphabet=alphabet,
                   terminate_at_zero=terminate_at_zero, snr=snr)

    def emissions(self, rx: ReceivedSequence) -> np.ndarray:
        """
        ``(L, S)`` observation log-densities of every state at every index.
        """
        if rx.n != self.n:
            raise ContractError("observations have dimension %d, system expects %d" % (rx.n, self.n))
        table = np.array([self.obs_logdensity(r, self._symbols) for r in rx.samples])
        return table[:, self._symbol_of_state]

    def __repr__(self):
        return "HmmSystem(states=%d, n=%d)" % (self.num_states, self.n)


def _gaussian_family(mapper: SymbolMapper, n: int, snr: float):
    if not 0 < snr < math.inf:
        raise ConfigurationError("snr must be positive and finite", key="snr")
    d_min2, d_max2 = signal_distances(mapper, n)
    d_min = math.sqrt(d_min2)
    const = 0.5 * n * math.log(snr / (2 * math.pi))
    alphabet = np.array(list(itertools.product(range(mapper.field.q), repeat=n)), dtype=np.int64)

    def squared(r, ys):
        return ((np.asarray(r, dtype=np.float64) - mapper(ys)) ** 2).sum(axis=-1)

    def density(r, ys):
        return const - 0.5 * snr * squared(r, ys)

    def low(r, ys):
        e2 = squared(r, ys)
        e = np.sqrt(e2)
        return np.where(e <= d_min, 0.5 * snr * d_min * (d_min - 2 * e), -0.5 * snr * e2)

    def high(r, ys):
        return snr * (squared(r, ys) + d_max2)

    return density, low, high, alphabet


def gaussian_conv_system(code: GeneratorMatrix, mapper: SymbolMapper, snr: float) -> HmmSystem:
    """
    The convolutional code as a hidden Markov system: states are source windows,
    transitions are uniform over the ``q**k`` shift successors, processed states
    are codeword symbols and observations are Gaussian.
    """
    S, Q = code.state_count, code.symbol_count
    log_p = np.full((S, S), -np.inf)
    states = np.arange(S)
    succ = (states[:, None] * Q) % S + np.arange(Q)[None, :]
    log_p[np.repeat(states, Q), succ.ravel()] = -math.log(Q)
    density, low, high, alphabet = _gaussian_family(mapper, code.n, snr)
    return HmmSystem(log_p, code.state_outputs, density, low, high, alphabet=alphabet,
                     terminate_at_zero=True, snr=snr, nu=None)


def transition_ratio_bound(sys: HmmSystem) -> float:
    """
    ``p_tr``: smallest ratio between two positive transition probabilities.
    """
    finite = sys.log_transition[sys.allowed]
    if not finite.size:
        raise ContractError("the system has no positive transition")
    return float(math.exp(finite.min() - finite.max()))


def homogeneity_order(sys: HmmSystem, cap: int = ORDER_CAP) -> int:
    """
    Smallest ``nu`` whose ``nu``-step transition matrix is strictly positive.

    :raise: ``ConfigurationError`` if no power up to ``cap`` is positive
    """
    step = sys.allowed.astype(np.int64)
    reach = step.copy()
    for nu in range(1, cap + 1):
        if reach.all():
            return nu
        reach = ((reach @ step) > 0).astype(np.int64)
    raise ConfigurationError("no positive transition power up to %d steps; the chain is not "
                             "ergodic" % cap, key="transitions")


def _pair_budget(sys: HmmSystem, budget: int) -> None:
    pairs = sys.num_states ** 2
    if pairs > budget:
        raise ResourceError("state pairs", pairs, budget)


def verify_observability(sys: HmmSystem, nu: int, budget: int = PAIR_BUDGET) -> bool:
    """
    Whether two valid sequences that differ at ``d`` always have different processed
    symbols somewhere in ``(d-nu, d+nu)``.

    Works on the product automaton of state pairs with equal processed symbols: a
    violation is a differing pair that has a silent walk of ``nu-1`` steps ahead and
    either ``nu-1`` steps behind or a path back to the zero origin.
    """
    if nu < 1:
        raise ContractError("nu must be positive")
    _pair_budget(sys, budget)
    step = sys.allowed.astype(np.int64)
    silent = (sys.outputs[:, None, :] == sys.outputs[None, :, :]).all(axis=2)
    origin = np.outer(step[0], step[0]) > 0

    ahead = silent.copy()
    behind = silent.copy()
    for _ in range(nu - 1):
        ahead = silent & ((step @ ahead.astype(np.int64) @ step.T) > 0)
        # a pair entered from the origin has nothing observable before it
        behind = silent & (origin | ((step.T @ behind.astype(np.int64) @ step) > 0))

    differing = ~np.eye(sys.num_states, dtype=bool)
    return not np.any(differing & ahead & behind)


def observability_order(sys: HmmSystem, cap: int = ORDER_CAP) -> int:
    for nu in range(1, cap + 1):
        if verify_observability(sys, nu):
            return nu
    raise ConfigurationError("processed states do not reveal the Markov state within %d steps" % cap,
                             key="process")


def _transition_costs(sys: HmmSystem):
    with np.errstate(invalid="ignore"):
        cost = -sys.log_transition
    initial = cost[0]
    final = cost[:, 0] if sys.terminate_at_zero else None
    return cost, initial, final


def hmm_negative_sll(sys: HmmSystem, rx: ReceivedSequence, seq: StateSequence) -> float:
    """
    ``-sum_d [log f_o(r[d] | y[d]) + log P_t(u[d] | u[d-1])]`` with ``u[-1] = 0``, plus
    the closing step into zero when the system terminates there.

    :raise: ``ContractError`` on a forbidden transition
    """
    if len(seq) != rx.span:
        raise ContractError("sequence has %d states for %d observations" % (len(seq), rx.span))
    emis = sys.emissions(rx)
    prev = np.concatenate(([0], seq.states[:-1]))
    steps = sys.log_transition[prev, seq.states]
    if sys.terminate_at_zero:
        steps = np.append(steps, sys.log_transition[seq.states[-1], 0])
    if not np.all(np.isfinite(steps)):
        raise ContractError("sequence uses a forbidden transition")
    terms = np.concatenate((emis[np.arange(rx.span), seq.states], steps))
    return -math.fsum(terms)


def hmm_viterbi(sys: HmmSystem, rx: ReceivedSequence) -> Tuple[StateSequence, ComplexityStats]:
    """
    Exact minimiser of :func:`hmm_negative_sll`; ties go to the lexicographically
    smaller state sequence.
    """
    emis = sys.emissions(rx)
    cost, initial, final = _transition_costs(sys)
    S = sys.num_states
    predecessors = np.tile(np.arange(S), (S, 1))
    found = search(rx.span, predecessors, lambda d: -emis[d], initial,
                   lambda d: np.ones(S, dtype=bool), transition_cost=cost.T, final_cost=final)
    return StateSequence(found.states), ComplexityStats(found.visited_states, rx.span, rx.span)


def hmm_brute_force(sys: HmmSystem, rx: ReceivedSequence, budget: int = SEQUENCE_BUDGET) -> StateSequence:
    """
    Walks every valid sequence in lexicographic order; the first minimum wins.

    :raise: ``ResourceError`` if more than ``budget`` valid sequences exist
    """
    emis = -sys.emissions(rx)
    cost, initial, final = _transition_costs(sys)
    L, S = rx.span, sys.num_states
    if L < 1:
        raise ContractError("need at least one observation")

    # count[d, s]: valid completions from state s at index d
    ok = np.isfinite(cost)
    count = np.zeros((L, S), dtype=object)
    count[L - 1] = np.isfinite(final).astype(object) if final is not None else np.ones(S, dtype=object)
    for d in range(L - 2, -1, -1):
        count[d] = [sum(count[d + 1][ok[s]]) for s in range(S)]
    total = sum(count[0][np.isfinite(initial)])
    if total > budget:
        raise ResourceError("brute-force sequence space", total, budget)
    if total == 0:
        raise ContractError("no valid state sequence")

    best = [math.inf, None]
    path = np.zeros(L, dtype=np.int64)

    def walk(d: int, s: int, acc: float) -> None:
        path[d] = s
        acc += emis[d, s]
        if d == L - 1:
            closing = acc + (final[s] if final is not None else 0.0)
            if closing < best[0]:
                best[0], best[1] = closing, path.copy()
            return
        for t in range(S):
            if ok[s, t] and count[d + 1][t]:
                walk(d + 1, t, acc + cost[s, t])

    for s in range(S):
        if np.isfinite(initial[s]) and count[0][s]:
            walk(0, s, initial[s])
    return StateSequence(best[1])


def snr_scaled_rho(xi: float, snr: float, nu: int) -> float:
    """
    ``rho = xi*SNR/(3*nu)``, the preset that turns the generic test into the
    Gaussian one.
    """
    return xi * snr / (3 * nu)


def hmm_nll_confirm(sys: HmmSystem, rx: ReceivedSequence, candidate: StateSequence, m: int,
                    rho: float, M: int, boundary: str = "clip") -> bool:
    """
    Whether the candidate's state at ``m+nu-1`` is certified ML.

    Requires ``L_l > 3*nu*(rho - log p_tr)`` on ``[m - 2M*nu, m + 2M*nu)``, the right
    flank sum of ``L_u`` within ``3*M*nu*rho + (nu+1)*log p_tr`` and the left flank
    within ``3*M*nu*rho + nu*log p_tr``. With ``boundary = "extend"`` indices outside
    the observations pass and add nothing (every sequence is zero there).
    """
    if not rho > 0:
        raise ConfigurationError("rho must be positive", key="rho")
    if int(M) != M or M < 1:
        raise ConfigurationError("M must be a positive integer", key="M")
    if boundary not in BOUNDARY_MODES:
        raise ConfigurationError("unknown boundary mode %r" % boundary, key="boundary")
    if len(candidate) != rx.span:
        raise ContractError("candidate has %d states for %d observations" % (len(candidate), rx.span))

    nu = sys.nu
    log_ptr = math.log(transition_ratio_bound(sys))
    L = rx.span
    lo, inner_lo, inner_hi, hi = m - (2 * M + 1) * nu, m - 2 * M * nu, m + 2 * M * nu, m + (2 * M + 1) * nu
    if boundary == "clip" and (lo < 0 or hi > L):
        return False

    def values(func: BatchFunction, a: int, b: int) -> np.ndarray:
        a, b = max(a, 0), min(b, L)
        if a >= b:
            return np.zeros(0)
        ys = sys.outputs[candidate.states[a:b]]
        return np.array([float(func(rx.samples[d], ys[d - a:d - a + 1])[0]) for d in range(a, b)])

    if not np.all(values(sys.bound_l, inner_lo, inner_hi) > 3 * nu * (rho - log_ptr)):
        return False
    right = math.fsum(values(sys.bound_u, inner_hi, hi))
    left = math.fsum(values(sys.bound_u, lo, inner_lo))
    return right <= 3 * M * nu * rho + (nu + 1) * log_ptr and left <= 3 * M * nu * rho + nu * log_ptr


def check_bound_functions(sys: HmmSystem, observations, tolerance: float = 1e-9) -> int:
    """
    Count violations of ``L_l(r, y1) <= log f(r|y1) - log f(r|y2)`` (all ``y2 != y1``)
    and ``L_u(r, y1) >= log f(r|y3) - log f(r|y2)`` (all ``y2 != y3``) over every
    ``y1`` of the alphabet and every given observation.
    """
    obs = np.asarray(observations, dtype=np.float64).reshape(-1, sys.n)
    alphabet = sys.alphabet
    A = alphabet.shape[0]
    if A < 2:
        return 0
    violations = 0
    for r in obs:
        logf = np.asarray(sys.obs_logdensity(r, alphabet), dtype=np.float64)
        gaps = logf[:, None] - logf[None, :]
        np.fill_diagonal(gaps, np.inf)
        lowest = gaps.min(axis=1)
        highest = logf.max() - logf.min()
        low = np.asarray(sys.bound_l(r, alphabet), dtype=np.float64)
        high = np.asarray(sys.bound_u(r, alphabet), dtype=np.float64)
        slack = tolerance * (1.0 + np.abs(lowest))
        violations += int(np.sum(low > lowest + slack))
        violations += int(np.sum(high < highest - tolerance * (1.0 + abs(highest))))
    return violations


def lower_bound_exceedance(sys: HmmSystem, rx: ReceivedSequence, seq: StateSequence, gamma: float) -> float:
    """
    Fraction of indices with ``L_l(r[d], y[d]) >= gamma*SNR``.
    """
    if sys.snr is None:
        raise ConfigurationError("system carries no snr", key="snr")
    if len(seq) != rx.span:
        raise ContractError("sequence has %d states for %d observations" % (len(seq), rx.span))
    ys = sys.outputs[seq.states]
    low = np.array([float(sys.bound_l(rx.samples[d], ys[d:d + 1])[0]) for d in range(rx.span)])
    return float(np.mean(low >= gamma * sys.snr))


__all__ = [
    "HmmSystem", "StateSequence", "gaussian_conv_system", "transition_ratio_bound", "homogeneity_order",
    "verify_observability", "observability_order", "hmm_negative_sll", "hmm_viterbi", "hmm_brute_force",
    "hmm_nll_confirm", "snr_scaled_rho", "window_multiplier", "check_bound_functions",
    "lower_bound_exceedance",
]
