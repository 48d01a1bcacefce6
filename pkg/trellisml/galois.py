# -*- coding: UTF-8 -*-

"""
Arithmetic over prime fields GF(q).
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from trellisml.exceptions import ConfigurationError, FieldDomainError

ARITH_KINDS = ("add", "sub", "mul", "inv", "neg")


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    i = 2
    while i * i <= q:
        if q % i == 0:
            return False
        i += 1
    return True


class GF:
    """
    The prime field GF(q). Elements are integers in ``[0, q)``.
    """

    def __init__(self, q: int):
        """
        :param q: prime modulus
        :raise: ``ConfigurationError`` if ``q`` is not prime
        """
        if not isinstance(q, (int, np.integer)) or not _is_prime(int(q)):
            raise ConfigurationError("field size must be prime, got %r" % (q,), key="q")
        self.q = int(q)

    def __eq__(self, other):
        return isinstance(other, GF) and other.q == self.q

    def __hash__(self):
        return hash(("GF", self.q))

    def __repr__(self):
        return "GF(%d)" % self.q

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(int(value) % self.q, self)

    def elements(self) -> Tuple["FieldElement", ...]:
        return tuple(FieldElement(v, self) for v in range(self.q))

    def inverse(self, value: int) -> int:
        value = int(value) % self.q
        if value == 0:
            raise FieldDomainError("zero has no inverse in %r" % self)
        return pow(value, self.q - 2, self.q)

    def index_of(self, vector: Sequence[int]) -> int:
        """
        Integer label of a vector, first component most significant.
        """
        index = 0
        for v in vector:
            index = index * self.q + (int(v) % self.q)
        return index

    def vector_of(self, index: int, length: int) -> Tuple[int, ...]:
        digits = []
        for _ in range(length):
            digits.append(index % self.q)
            index //= self.q
        return tuple(reversed(digits))

    def rank(self, matrix) -> int:
        """
        Rank of an integer matrix over this field (Gaussian elimination).
        """
        m = np.array(matrix, dtype=np.int64) % self.q
        if m.ndim != 2:
            raise ConfigurationError("rank needs a 2-D matrix")
        rows, cols = m.shape
        rank = 0
        for col in range(cols):
            pivot = None
            for r in range(rank, rows):
                if m[r, col] != 0:
                    pivot = r
                    break
            if pivot is None:
                continue
            m[[rank, pivot]] = m[[pivot, rank]]
            m[rank] = (m[rank] * self.inverse(int(m[rank, col]))) % self.q
            for r in range(rows):
                if r != rank and m[r, col] != 0:
                    m[r] = (m[r] - m[r, col] * m[rank]) % self.q
            rank += 1
            if rank == rows:
                break
        return rank


@dataclass(frozen=True)
class FieldElement:
    value: int
    field: GF

    def __post_init__(self):
        if not 0 <= self.value < self.field.q:
            raise FieldDomainError("%d is not an element of %r" % (self.value, self.field))

    def _check(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement):
            raise FieldDomainError("cannot combine %r with %r" % (self, other))
        if other.field != self.field:
            raise FieldDomainError("elements of %r and %r cannot be combined" % (self.field, other.field))

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return self.field(self.value + other.value)

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return self.field(self.value - other.value)

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check(other)
        return self.field(self.value * other.value)

    def __neg__(self) -> "FieldElement":
        return self.field(-self.value)

    def inv(self) -> "FieldElement":
        return self.field(self.field.inverse(self.value))

    def __int__(self):
        return self.value

    def __repr__(self):
        return "%d (mod %d)" % (self.value, self.field.q)


def field_arith(kind: str, a: FieldElement, b: Optional[FieldElement] = None) -> FieldElement:
    """
    Apply one field operation.

    :param kind: one of ``add``, ``sub``, ``mul``, ``inv``, ``neg``
    :param a: first operand
    :param b: second operand, required for binary operations
    :return: the result, an element of the same field
    """
    if kind not in ARITH_KINDS:
        raise ConfigurationError("unknown operation %r" % kind, key="kind")
    if kind == "inv":
        return a.inv()
    if kind == "neg":
        return -a
    if b is None:
        raise FieldDomainError("%s needs two operands" % kind)
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    return a * b
