"""Tabulate graded dimensions of the catalog algebras next to closed-form counts.

The reference column comes from partition counting done here, independent of
the PBW bases the library builds.
"""
from __future__ import annotations

import argparse
from fractions import Fraction
from functools import lru_cache

from opecalc import vertexalg as va


def partitions_min_part(n: int, smallest: int) -> int:
    """Partitions of n into parts >= smallest."""

    @lru_cache(maxsize=None)
    def p(m, k):
        if m == 0:
            return 1
        return sum(p(m - j, j) for j in range(k, m + 1))

    return p(n, smallest)


def colored(n: int, colors: int) -> int:
    """Multipartitions of n into parts >= 1 with ``colors`` colors."""
    counts = [1] + [0] * n
    for part in range(1, n + 1):
        for _ in range(colors):
            for m in range(part, n + 1):
                counts[m] += counts[m - part]
    return counts[n]


def distinct_half_odd(w: Fraction) -> int:
    """Ways to write w as a sum of distinct numbers from 1/2, 3/2, 5/2, ..."""
    target = int(2 * w)
    ways = [1] + [0] * target
    for part in range(1, target + 1, 2):
        for m in range(target, part - 1, -1):
            ways[m] += ways[m - part]
    return ways[target]


def table(cutoff: int):
    rows = []
    ch = va.heisenberg(1, cutoff).character(cutoff)
    rows += [("heisenberg", w, d, colored(int(w), 1)) for w, d in ch.items()]
    ch = va.virasoro(Fraction(1, 2), cutoff).character(cutoff)
    rows += [("virasoro", w, d, partitions_min_part(int(w), 2)) for w, d in ch.items()]
    ch = va.clifford1(1, cutoff).character(cutoff)
    rows += [("clifford1", w, d, distinct_half_odd(w)) for w, d in ch.items()]
    sl2cut = min(cutoff, 5)
    ch = va.affine_sl2(1, sl2cut).character(sl2cut)
    rows += [("affine_sl2", w, d, colored(int(w), 3)) for w, d in ch.items()]
    return rows


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--cutoff", type=int, default=8)
    cutoff = p.parse_args().cutoff
    bad = 0
    print(f"{'algebra':12s} {'weight':>6s} {'dim':>6s} {'count':>6s}")
    for name, w, d, ref in table(cutoff):
        flag = "" if d == ref else "  MISMATCH"
        bad += d != ref
        print(f"{name:12s} {str(w):>6s} {d:6d} {ref:6d}{flag}")
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()
