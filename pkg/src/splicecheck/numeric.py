"""Exact arithmetic helpers: Hirzebruch-Jung continued fractions and Q/Z residues.

Everything here works on Python ints and :class:`fractions.Fraction`; nothing
in the package touches floating point.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence, Tuple

__all__ = [
    "Residue",
    "hj_expand",
    "hj_eval",
    "ceil_div",
    "gcd_many",
    "prod",
]


def ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def gcd_many(values: Iterable[int]) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
    return g


def prod(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out *= v
    return out


def hj_expand(d: int, p: int) -> Tuple[int, ...]:
    """Negative continued fraction ``d/p = k1 - 1/(k2 - 1/(...))`` with all ``k >= 2``.

    >>> hj_expand(7, 3)
    (3, 2, 2)
    """
    if p <= 0 or p >= d:
        raise ValueError(f"need 1 <= p < d, got d={d}, p={p}")
    if gcd(d, p) != 1:
        raise ValueError(f"d={d} and p={p} are not coprime")
    terms = []
    while p > 0:
        k = ceil_div(d, p)
        terms.append(k)
        d, p = p, k * p - d
    return tuple(terms)


def hj_eval(terms: Sequence[int]) -> Tuple[int, int]:
    """Evaluate ``[k1, ..., kt]`` to ``(d, p)``.

    ``d`` is the continuant of the whole sequence (the determinant of the
    string with self-intersections ``-k_i``) and ``p`` the continuant of the
    tail ``[k2, ..., kt]``.  Terms equal to 1 are accepted, in which case
    ``d/p`` need not exceed 1.
    """
    if len(terms) == 0:
        raise ValueError("empty continued fraction")
    # back-substitution from the far end: (num, den) of k_i - 1/(num/den)
    num, den = 1, 0
    for k in reversed(terms):
        num, den = k * num - den, num
    return num, den


class Residue:
    """A class in Q/Z, stored as the representative in ``[0, 1)``."""

    __slots__ = ("_value",)

    def __init__(self, value=0):
        value = Fraction(value)
        self._value = value - (value.numerator // value.denominator)

    @classmethod
    def make(cls, num: int, den: int = 1) -> "Residue":
        if den == 0:
            raise ZeroDivisionError("residue with zero denominator")
        return cls(Fraction(num, den))

    @property
    def value(self) -> Fraction:
        return self._value

    def __add__(self, other):
        if not isinstance(other, Residue):
            other = Residue(other)
        return Residue(self._value + other._value)

    __radd__ = __add__

    def __neg__(self):
        return Residue(-self._value)

    def __sub__(self, other):
        if not isinstance(other, Residue):
            other = Residue(other)
        return Residue(self._value - other._value)

    def scale(self, k: int) -> "Residue":
        return Residue(self._value * k)

    def is_zero(self) -> bool:
        return self._value == 0

    def __eq__(self, other):
        if isinstance(other, Residue):
            return self._value == other._value
        if isinstance(other, (int, Fraction)):
            return self == Residue(other)
        return NotImplemented

    def __hash__(self):
        return hash(("Residue", self._value))

    def __repr__(self):
        return f"Residue({self._value})"

    def __str__(self):
        return f"[{self._value}]"
