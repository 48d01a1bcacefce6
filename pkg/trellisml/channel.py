# -*- coding: UTF-8 -*-

"""
Symbol mapping, the memoryless Gaussian channel and signal geometry.
"""

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from trellisml.convcode import Codeword
from trellisml.exceptions import ConfigurationError, ContractError, ResourceError
from trellisml.galois import GF

# Largest q**n alphabet enumerated by signal_distances.
ALPHABET_BUDGET = 2 ** 12


class SymbolMapper:
    """
    One-to-one map ``g_q`` from GF(q) to the reals, applied elementwise.
    """

    def __init__(self, field: GF, table: Optional[Sequence[float]] = None):
        """
        :param field: symbol field
        :param table: ``q`` real values; defaults to symmetric PAM ``(q-1) - 2v``
        """
        if table is None:
            table = [float((field.q - 1) - 2 * v) for v in range(field.q)]
        values = tuple(float(v) for v in table)
        if len(values) != field.q:
            raise ConfigurationError("map needs %d values, got %d" % (field.q, len(values)), key="map")
        if len(set(values)) != len(values):
            raise ConfigurationError("map must be one-to-one", key="map")
        if not all(math.isfinite(v) for v in values):
            raise ConfigurationError("map values must be finite", key="map")
        self.field = field
        self.table = values
        self._lookup = np.array(values, dtype=np.float64)

    def __call__(self, symbols) -> np.ndarray:
        return self._lookup[np.asarray(symbols, dtype=np.int64)]

    def difference_distance(self, v: int) -> float:
        """
        Smallest ``(g(b+v) - g(b))**2`` over all ``b``; zero for ``v = 0``.
        """
        q = self.field.q
        v %= q
        if v == 0:
            return 0.0
        return min((self._lookup[(b + v) % q] - self._lookup[b]) ** 2 for b in range(q))

    def translated(self, offset: float) -> "SymbolMapper":
        return SymbolMapper(self.field, [v + offset for v in self.table])

    def __repr__(self):
        return "SymbolMapper(%r)" % (self.table,)


@dataclass(frozen=True)
class NoiseModel:
    sigma2: float

    def __post_init__(self):
        if not self.sigma2 >= 0 or not math.isfinite(self.sigma2):
            raise ConfigurationError("noise variance must be finite and >= 0", key="sigma2")

    @classmethod
    def from_snr(cls, snr: float) -> "NoiseModel":
        if not snr > 0:
            raise ConfigurationError("snr must be positive", key="snr")
        return cls(0.0 if math.isinf(snr) else 1.0 / snr)

    @property
    def snr(self) -> float:
        return math.inf if self.sigma2 == 0 else 1.0 / self.sigma2


class ReceivedSequence:
    """
    Real observation vectors ``r[d]``, one per transmitted index.
    """

    def __init__(self, samples):
        arr = np.array(samples, dtype=np.float64)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1)
        if arr.ndim != 2:
            raise ContractError("received samples must form a span x n array")
        self.samples = arr

    @property
    def span(self) -> int:
        return self.samples.shape[0]

    @property
    def n(self) -> int:
        return self.samples.shape[1]

    def __len__(self):
        return self.span

    def __getitem__(self, d):
        return self.samples[d]

    def __repr__(self):
        return "ReceivedSequence(span=%d, n=%d)" % (self.span, self.n)


def trial_rng(seed: int, *key: int) -> np.random.Generator:
    """
    Generator for one independent stream, e.g. ``trial_rng(seed, N, trial_index)``.
    Streams depend only on the seed and the key, never on execution order.
    """
    return np.random.default_rng(np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key)))


def modulate(cw: Codeword, mapper: SymbolMapper) -> np.ndarray:
    if cw.field != mapper.field:
        raise ContractError("codeword and mapper are over different fields")
    return mapper(cw.symbols)


def transmit(modulated: np.ndarray, noise: NoiseModel, rng: np.random.Generator) -> ReceivedSequence:
    """
    ``r[d] = g_q(y[d]) + n[d]`` with i.i.d. ``N(0, sigma2)`` coordinates.
    """
    clean = np.asarray(modulated, dtype=np.float64)
    z = rng.standard_normal(clean.shape)
    return ReceivedSequence(clean + math.sqrt(noise.sigma2) * z)


def signal_distances(mapper: SymbolMapper, n: int, budget: int = ALPHABET_BUDGET) -> Tuple[float, float]:
    """
    ``(d_min2, d_max2)`` over distinct mapped n-dimensional symbols.

    :raise: ``ResourceError`` if ``q**n`` exceeds ``budget``
    """
    q = mapper.field.q
    count = q ** n
    if count > budget:
        raise ResourceError("symbol alphabet", count, budget)
    points = np.array([mapper(v) for v in itertools.product(range(q), repeat=n)], dtype=np.float64)
    d_min2, d_max2 = math.inf, 0.0
    for i in range(count - 1):
        dist = ((points[i + 1:] - points[i]) ** 2).sum(axis=1)
        d_min2 = min(d_min2, float(dist.min()))
        d_max2 = max(d_max2, float(dist.max()))
    return d_min2, d_max2
