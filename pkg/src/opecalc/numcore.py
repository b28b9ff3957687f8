"""Exact scalars, parities and binomial combinatorics.

All coefficients in the package are :class:`fractions.Fraction` values; the
helpers here accept ints, Fractions and ``"p/q"`` strings.
"""
from __future__ import annotations

from enum import IntEnum
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

Scalar = Fraction


class Parity(IntEnum):
    EVEN = 0
    ODD = 1

    def __add__(self, other):  # type: ignore[override]
        return Parity((int(self) + int(other)) % 2)

    __radd__ = __add__

    @classmethod
    def parse(cls, text: str | int) -> "Parity":
        if isinstance(text, int):
            return cls(text % 2)
        t = text.strip().lower()
        if t in ("even", "0", "bosonic"):
            return cls.EVEN
        if t in ("odd", "1", "fermionic"):
            return cls.ODD
        raise ValueError(f"unknown parity {text!r}")


class NonStatisticalExponent(ValueError):
    """Raised where a sign (-1)^x would need a branch choice (x not an integer)."""


def scalar(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact scalar")


def exact(x):
    """Normalize an exact scalar: integral values become ints (faster arithmetic)."""
    x = scalar(x)
    return x.numerator if x.denominator == 1 else x


def is_integer(x) -> bool:
    return Fraction(x).denominator == 1


@lru_cache(maxsize=200_000)
def _binom(a: Fraction, n: int) -> Fraction:
    out = Fraction(1)
    for i in range(n):
        out = out * (a - i) / (i + 1)
    return out


@lru_cache(maxsize=200_000)
def _binom_int(a: int, n: int) -> int:
    if a >= 0:
        return comb(a, n)
    return comb(n - a - 1, n) * (-1 if n % 2 else 1)


def binom(a, n: int):
    """Generalized binomial coefficient prod_{i<n} (a - i) / n!, zero for n < 0.

    Integer ``a`` gives an exact int; anything else a Fraction.
    """
    if n < 0:
        return 0
    if type(a) is int:
        return _binom_int(a, n)
    a = scalar(a)
    if a.denominator == 1:
        return _binom_int(a.numerator, int(n))
    return _binom(a, int(n))


def supersign(p: int, q: int) -> int:
    """(-1)^{pq}."""
    return -1 if (p % 2 and q % 2) else 1


def signed_power(k) -> int:
    """(-1)^k for integer k; rejects anything needing a branch of the power."""
    k = Fraction(k)
    if k.denominator != 1:
        raise NonStatisticalExponent(f"(-1)^{k} is not branch-independent")
    return -1 if k.numerator % 2 else 1


def divided_power_factor(n: int) -> Fraction:
    return Fraction(1, factorial(n))


def render_scalar(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"
