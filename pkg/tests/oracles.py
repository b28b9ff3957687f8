"""Independent reference computations.

Nothing here imports opecalc; each oracle is deliberately naive (explicit
enumeration or a falling factorial) so that agreement is evidence.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations


def binom(a, n: int) -> Fraction:
    """a(a-1)...(a-n+1)/n! with the falling factorial written out."""
    if n < 0:
        return Fraction(0)
    num, den = Fraction(1), 1
    for i in range(n):
        num *= Fraction(a) - i
        den *= i + 1
    return num / den


def partitions(total, parts):
    """All multisets of ``parts`` (each usable repeatedly) summing to ``total``."""
    parts = sorted(set(parts), reverse=True)
    out = []

    def rec(rest, start, cur):
        if rest == 0:
            out.append(tuple(cur))
            return
        for i in range(start, len(parts)):
            p = parts[i]
            if p <= rest:
                cur.append(p)
                rec(rest - p, i, cur)
                cur.pop()

    rec(total, 0, [])
    return out


def colored_partition_count(total: int, parts, colors: int) -> int:
    """Multisets of (part, color) pairs: enumerate colored parts as distinct labels."""
    labelled = [(p, c) for p in parts for c in range(colors)]
    labelled.sort(reverse=True)
    count = 0

    def rec(rest, start):
        nonlocal count
        if rest == 0:
            count += 1
            return
        for i in range(start, len(labelled)):
            p = labelled[i][0]
            if p <= rest:
                rec(rest - p, i)

    rec(total, 0)
    return count


def distinct_subset_count(total, parts) -> int:
    """Subsets of ``parts`` (each used at most once) with the given sum."""
    parts = [p for p in parts if p <= total]
    return sum(1 for r in range(len(parts) + 1) for c in combinations(parts, r) if sum(c) == total)


def heisenberg_character(top: int) -> list:
    return [len(partitions(n, range(1, n + 1))) for n in range(top + 1)]


def virasoro_character(top: int) -> list:
    return [len(partitions(n, range(2, n + 1))) for n in range(top + 1)]


def sl2_character(top: int) -> list:
    return [colored_partition_count(n, range(1, n + 1), 3) for n in range(top + 1)]


def fermion_character(top) -> dict:
    """Weights 0, 1/2, ..., top: subsets of {1/2, 3/2, ...} by sum."""
    half = Fraction(1, 2)
    parts = [half + k for k in range(int(2 * top) + 1)]
    out = {}
    w = Fraction(0)
    while w <= top:
        out[w] = distinct_subset_count(w, parts)
        w += half
    return out


def delta_coeff(pz, pw) -> int:
    """Coefficient of z^pz w^pw in delta(z, w) = sum w^n z^{-n-1}."""
    return 1 if pz == -pw - 1 else 0


def delta_derivative_coeff(n: int, pz, pw) -> Fraction:
    """Coefficient of z^pz w^pw in the n-th divided w-derivative of delta(z, w)."""
    # d_w^{(n)} w^m z^{-m-1} = binom(m, n) w^{m-n} z^{-m-1}
    m = -pz - 1
    if pw != m - n:
        return Fraction(0)
    return binom(m, n)


def expansion_coeff(mu: int, nu: int, h, i: int) -> Fraction:
    """Coefficient of z^{h-i} w^i in (mu z + nu w)^h for z > w, mu = +-1."""
    h = Fraction(h)
    if mu == 1:
        lead = Fraction(1)
    else:
        if (h - i).denominator != 1:
            raise ValueError("branch needed")
        lead = Fraction((-1) ** abs(int(h - i)))
    return binom(h, i) * lead * Fraction(nu) ** i
