# -*- coding: UTF-8 -*-

"""
Convolutional codes over GF(q): generator taps, encoding and the shift-register
trellis every decoder walks.

A Markov state at time ``d`` is the window ``[x[d-nu+1], ..., x[d]]`` of the last
``nu`` source symbols (oldest first). States are labelled by integers: each
k-dimensional source symbol is an index in ``[0, q**k)`` and the window is read
as a base-``q**k`` number with the oldest symbol most significant.
"""

import itertools
from collections import namedtuple
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from trellisml.exceptions import ConfigurationError, ContractError, ResourceError
from trellisml.galois import GF

# Upper bound on the number of windows enumerated by the observability check.
OBSERVABILITY_BUDGET = 2 ** 20

# Default cap on q**(k*nu).
STATE_BUDGET = 2 ** 16

Edge = namedtuple("Edge", "state, input, next_state, x, y")


class Message:
    """
    A source message: ``N`` row vectors of dimension ``k``.
    """

    def __init__(self, symbols, field: GF):
        arr = np.array(symbols, dtype=np.int64)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1)
        if arr.ndim != 2:
            raise ContractError("message symbols must form an N x k array")
        if arr.size and (arr.min() < 0 or arr.max() >= field.q):
            raise ContractError("message symbols must lie in [0, %d)" % field.q)
        self.symbols = arr
        self.field = field

    @property
    def N(self) -> int:
        return self.symbols.shape[0]

    @property
    def k(self) -> int:
        return self.symbols.shape[1]

    def indices(self) -> np.ndarray:
        """
        Symbol labels in ``[0, q**k)``, one per time index.
        """
        weights = self.field.q ** np.arange(self.k - 1, -1, -1, dtype=np.int64)
        return self.symbols @ weights

    @classmethod
    def from_indices(cls, indices: Sequence[int], field: GF, k: int) -> "Message":
        return cls([field.vector_of(int(i), k) for i in indices] or np.zeros((0, k)), field)

    def tolist(self) -> List[List[int]]:
        return self.symbols.tolist()

    def __len__(self):
        return self.N

    def __eq__(self, other):
        return isinstance(other, Message) and other.field == self.field \
            and np.array_equal(other.symbols, self.symbols)

    def __repr__(self):
        return "Message(%s)" % self.tolist()


class Codeword(Message):
    """
    A codeword: ``N+nu-1`` row vectors of dimension ``n``. Zero beyond.
    """

    def __repr__(self):
        return "Codeword(%s)" % self.tolist()


@dataclass(frozen=True)
class MarkovState:
    window: Tuple[int, ...]


class GeneratorMatrix:
    """
    The polynomial encoder ``G(D) = G[0] + G[1]D + ... + G[nu-1]D^(nu-1)``.
    """

    def __init__(self, field: GF, taps, check_observability: bool = True):
        """
        :param field: symbol field
        :param taps: integer array of shape ``(nu, k, n)``
        :param check_observability: reject generators whose codewords can hide a source
            symbol difference for ``nu`` indices
        """
        arr = np.array(taps, dtype=np.int64)
        if arr.ndim != 3 or 0 in arr.shape:
            raise ConfigurationError("taps must have shape (nu, k, n)", key="taps")
        if arr.min() < 0 or arr.max() >= field.q:
            raise ConfigurationError("taps must lie in [0, %d)" % field.q, key="taps")
        if not arr[0].any():
            raise ConfigurationError("G[0] is all-zero; the encoder is not delay-free", key="taps")

        self.field = field
        self.taps = arr
        self.nu, self.k, self.n = arr.shape
        self.symbol_count = field.q ** self.k
        self.state_count = self.symbol_count ** self.nu

        self._state_digits = None
        self._state_outputs = None

        if check_observability and not self.is_observable():
            raise ConfigurationError("generator is not observable: a source symbol difference "
                                     "can stay hidden for %d indices" % self.nu, key="taps")

    @classmethod
    def from_octal(cls, octals: Sequence[Union[int, str]], q: int = 2, **kw) -> "GeneratorMatrix":
        """
        Binary rate-1/n code from octal generator polynomials, e.g. ``[7, 5]``.
        The most significant bit of each polynomial is the ``G[0]`` tap.
        """
        if q != 2:
            raise ConfigurationError("octal generators describe binary codes only", key="octal")
        try:
            polys = [int(str(o), 8) for o in octals]
        except ValueError:
            raise ConfigurationError("not an octal list: %r" % (octals,), key="octal")
        if not polys or min(polys) <= 0:
            raise ConfigurationError("octal generators must be positive", key="octal")
        nu = max(p.bit_length() for p in polys)
        taps = np.zeros((nu, 1, len(polys)), dtype=np.int64)
        for j, p in enumerate(polys):
            for l in range(nu):
                taps[l, 0, j] = (p >> (nu - 1 - l)) & 1
        return cls(GF(2), taps, **kw)

    @classmethod
    def from_rows(cls, q: int, k: int, n: int, nu: int, taps: Sequence[int], **kw) -> "GeneratorMatrix":
        """
        Build from a row-major tap list ``G[0][0][0], G[0][0][1], ...``.
        """
        if len(taps) != nu * k * n:
            raise ConfigurationError("expected %d taps, got %d" % (nu * k * n, len(taps)), key="taps")
        return cls(GF(q), np.array(taps, dtype=np.int64).reshape(nu, k, n), **kw)

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def state_digits(self) -> np.ndarray:
        """
        ``(S, nu)`` symbol labels of every state window, oldest first.
        """
        if self._state_digits is None:
            s = np.arange(self.state_count, dtype=np.int64)
            digits = np.zeros((self.state_count, self.nu), dtype=np.int64)
            for i in range(self.nu - 1, -1, -1):
                digits[:, i] = s % self.symbol_count
                s //= self.symbol_count
            self._state_digits = digits
        return self._state_digits

    @property
    def input_vectors(self) -> np.ndarray:
        """
        ``(q**k, k)`` table from symbol label to source symbol.
        """
        return np.array([self.field.vector_of(a, self.k) for a in range(self.symbol_count)],
                        dtype=np.int64).reshape(self.symbol_count, self.k)

    @property
    def state_outputs(self) -> np.ndarray:
        """
        ``(S, n)`` codeword symbol ``y(u)`` produced in each state.
        """
        if self._state_outputs is None:
            vectors = self.input_vectors[self.state_digits]  # (S, nu, k), oldest first
            # x[d-l] sits at window position nu-1-l
            out = np.einsum("slk,lkn->sn", vectors[:, ::-1, :], self.taps)
            self._state_outputs = out % self.q
        return self._state_outputs

    def state_index(self, window: Sequence[int]) -> int:
        """
        Label of a flattened ``k*nu`` window (oldest symbol first).
        """
        if len(window) != self.k * self.nu:
            raise ContractError("window must have %d entries" % (self.k * self.nu))
        return self.field.index_of(window)

    def next_state(self, state: int, symbol: int) -> int:
        return (state * self.symbol_count) % self.state_count + symbol

    def output(self, window: Sequence[int]) -> np.ndarray:
        return self.state_outputs[self.state_index(window)]

    def is_observable(self) -> bool:
        """
        Check that two messages differing at index ``m`` always have codewords that
        differ somewhere in ``[m, m+nu)``. By linearity it is enough to look at every
        difference window ``e[m-nu+1 .. m+nu-1]`` with ``e[m] != 0``.
        """
        Q, nu = self.symbol_count, self.nu
        required = (Q - 1) * Q ** (2 * nu - 2)
        if required > OBSERVABILITY_BUDGET:
            raise ResourceError("observability check", required, OBSERVABILITY_BUDGET)

        weights = Q ** np.arange(nu - 1, -1, -1, dtype=np.int64)
        for before in itertools.product(range(Q), repeat=nu - 1):
            for pivot in range(1, Q):
                for after in itertools.product(range(Q), repeat=nu - 1):
                    e = np.array(before + (pivot,) + after, dtype=np.int64)
                    states = [int(e[j:j + nu] @ weights) for j in range(nu)]
                    if not self.state_outputs[states].any():
                        return False
        return True

    def __repr__(self):
        return "GeneratorMatrix(q=%d, k=%d, n=%d, nu=%d)" % (self.q, self.k, self.n, self.nu)


def _check_message(msg: Message, code: GeneratorMatrix) -> None:
    if msg.field != code.field:
        raise ContractError("message and code are over different fields")
    if msg.k != code.k:
        raise ContractError("message symbols have dimension %d, code expects %d" % (msg.k, code.k))


def encode(msg: Message, code: GeneratorMatrix) -> Codeword:
    """
    ``y[d] = sum_l x[d-l] G[l]`` for ``d`` in ``[0, N+nu-1)``.
    """
    _check_message(msg, code)
    span = msg.N + code.nu - 1
    y = np.zeros((span, code.n), dtype=np.int64)
    for l in range(code.nu):
        y[l:l + msg.N] += msg.symbols @ code.taps[l]
    return Codeword(y % code.q, code.field)


def state_indices(code: GeneratorMatrix, labels: np.ndarray) -> np.ndarray:
    """
    State labels ``u[0 .. N+nu-2]`` for one or many messages given as symbol labels.

    :param labels: integer array ``(..., N)``
    :return: integer array ``(..., N+nu-1)``
    """
    labels = np.asarray(labels, dtype=np.int64)
    pad = [(0, 0)] * (labels.ndim - 1) + [(code.nu - 1, code.nu - 1)]
    padded = np.pad(labels, pad)
    span = labels.shape[-1] + code.nu - 1
    states = np.zeros(labels.shape[:-1] + (span,), dtype=np.int64)
    for i in range(code.nu):
        states = states * code.symbol_count + padded[..., i:i + span]
    return states


def state_sequence(msg: Message, code: GeneratorMatrix) -> List[MarkovState]:
    """
    The Markov states ``u[d]`` for ``d`` in ``[0, N+nu-1)``.
    """
    _check_message(msg, code)
    padded = np.vstack([np.zeros((code.nu - 1, code.k), dtype=np.int64),
                        msg.symbols,
                        np.zeros((code.nu - 1, code.k), dtype=np.int64)])
    span = msg.N + code.nu - 1
    return [MarkovState(tuple(int(v) for v in padded[d:d + code.nu].reshape(-1))) for d in range(span)]


class Trellis:
    """
    Time-indexed view of the shift-register graph for blocks of length ``N``.
    Edges leaving time ``d`` carry the input ``x[d+1]``; inputs at ``d >= N`` are zero.
    """

    def __init__(self, code: GeneratorMatrix, N: int, max_states: int = STATE_BUDGET):
        if N < 1:
            raise ContractError("block length must be positive")
        if code.state_count > max_states:
            raise ResourceError("trellis states", code.state_count, max_states)
        self.code = code
        self.N = N
        self.span = N + code.nu - 1
        self.num_states = code.state_count
        Q = code.symbol_count
        states = np.arange(self.num_states, dtype=np.int64)
        self.successors = (states[:, None] * Q) % self.num_states + np.arange(Q)[None, :]
        high = Q ** (code.nu - 1)
        self.predecessors = np.arange(Q)[None, :] * high + (states // Q)[:, None]
        self._masks = {}

    def reachable(self, d: int) -> np.ndarray:
        """
        Boolean mask of the states that can occur at time ``d``.
        """
        mask = self._masks.get(d)
        if mask is None:
            digits = self.code.state_digits
            mask = np.ones(self.num_states, dtype=bool)
            for i in range(self.code.nu):
                t = d - self.code.nu + 1 + i
                if t < 0 or t >= self.N:
                    mask &= digits[:, i] == 0
            self._masks[d] = mask
        return mask

    def states_at(self, d: int) -> np.ndarray:
        return np.flatnonzero(self.reachable(d))

    def inputs_at(self, d: int) -> int:
        """
        Number of admissible source symbols ``x[d]``.
        """
        return self.code.symbol_count if 0 <= d < self.N else 1

    def edges(self, d: int) -> List[Edge]:
        """
        Edges leaving the states reachable at time ``d`` (``d = -1`` is the zero origin).
        """
        if d >= self.span - 1:
            return []
        origins = [0] if d < 0 else self.states_at(d)
        vectors = self.code.input_vectors
        outputs = self.code.state_outputs
        edges = []
        for s in origins:
            for a in range(self.inputs_at(d + 1)):
                t = int(self.successors[s, a])
                edges.append(Edge(int(s), a, t, tuple(vectors[a]), tuple(outputs[t])))
        return edges


def trellis(code: GeneratorMatrix, N: int, max_states: int = STATE_BUDGET) -> Trellis:
    return Trellis(code, N, max_states=max_states)
