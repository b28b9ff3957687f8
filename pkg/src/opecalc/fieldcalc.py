"""Graded state spaces, fields acting on them, and the holomorphic checkers.

A field is a weight-homogeneous family of modes ``a_(n)`` given by a
function ``(n, basis_key) -> Vector``.  Results are memoized per field.
Everything is evaluated against basis vectors of weight at most a cutoff.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import count
from typing import Callable, Hashable, Iterable, Protocol

from .numcore import binom, divided_power_factor, supersign
from .report import FAIL, PASS, SKIP, CheckRecord, Report


class UndeterminedAboveCutoff(ArithmeticError):
    """A requested coefficient lies beyond the weight the data can determine."""


class Vector(dict):
    """Finite linear combination of basis keys with exact coefficients."""

    __slots__ = ()

    @classmethod
    def basis(cls, key, coeff=1) -> "Vector":
        return cls({key: coeff}) if coeff else cls()

    def add_scaled(self, other: dict, c=1) -> "Vector":
        """In-place self += c * other, pruning zeros."""
        if not c:
            return self
        for k, v in other.items():
            nv = self.get(k, 0) + c * v
            if nv:
                self[k] = nv
            else:
                self.pop(k, None)
        return self

    def __add__(self, other):
        return Vector(self).add_scaled(other, 1)

    def __sub__(self, other):
        return Vector(self).add_scaled(other, -1)

    def __neg__(self):
        return Vector({k: -v for k, v in self.items()})

    def scale(self, c) -> "Vector":
        if not c:
            return Vector()
        return Vector({k: c * v for k, v in self.items()})

    def __mul__(self, c):
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented

    __rmul__ = __mul__

    def render(self, namer: Callable[[Hashable], str] = str) -> str:
        if not self:
            return "0"
        parts = []
        for k in sorted(self, key=lambda k: namer(k)):
            c = self[k]
            parts.append(f"{c}*{namer(k)}")
        return " + ".join(parts)

    def __str__(self):
        return self.render()


def vsum(terms: Iterable[tuple]) -> Vector:
    out = Vector()
    for c, vec in terms:
        out.add_scaled(vec, c)
    return out


class GradedSpace(Protocol):
    min_weight: Fraction

    def weight(self, key) -> Fraction: ...

    def parity(self, key) -> int: ...

    def basis(self, cutoff) -> list: ...

    def name(self, key) -> str: ...


class StateFieldAlgebra(GradedSpace, Protocol):
    """A graded space with n-th products of states and a translation operator.

    ``bound(a, c)`` is a certified upper bound for n with a_(n)c != 0.
    ``bounded_below`` says whether weights under ``min_weight`` are empty
    (then such outputs vanish) or merely outside the sampled window.
    """

    bounded_below: bool

    def bound(self, a, c) -> int: ...

    def product(self, a: dict, n: int, c: dict) -> Vector: ...

    def T(self, vec: dict) -> Vector: ...


def vector_weight(space: GradedSpace, vec: dict):
    ws = {space.weight(k) for k in vec}
    if len(ws) > 1:
        raise ValueError("vector is not homogeneous")
    return ws.pop() if ws else None


def vector_parity(space: GradedSpace, vec: dict) -> int:
    ps = {space.parity(k) for k in vec}
    if len(ps) > 1:
        raise ValueError("vector has mixed parity")
    return ps.pop() if ps else 0


def mode_bound(h, wv, min_weight) -> int:
    """Largest n for which a weight-h mode a_(n) can be nonzero on weight wv."""
    return math.floor(Fraction(h) + Fraction(wv) - 1 - Fraction(min_weight))


@dataclass
class GradedMap:
    """Weight-homogeneous operator given by its action on basis keys."""

    space: GradedSpace
    shift: Fraction
    parity: int
    action: Callable[[Hashable], Vector]

    def __call__(self, vec: dict) -> Vector:
        out = Vector()
        for k, c in vec.items():
            out.add_scaled(self.action(k), c)
        return out


_field_ids = count()


class Field:
    """Weight-homogeneous field a(z) = sum_n a_(n) z^{-n-1} on a graded space.

    ``action(n, key)`` returns a_(n) applied to a basis key.  Evaluations are
    cached; ``limit`` (optional) is the largest output weight the action
    can determine.
    """

    def __init__(self, space: GradedSpace, weight, parity: int,
                 action: Callable[[int, Hashable], Vector], name: str = "field",
                 limit=None):
        self.space = space
        self.weight = Fraction(weight)
        self.parity = int(parity) % 2
        self._action = action
        self.name = name
        self.limit = limit
        self.id = next(_field_ids)
        self._cache: dict = {}

    def __repr__(self):
        return f"Field({self.name}, weight={self.weight}, parity={self.parity})"

    def bound(self, key) -> int:
        fb = getattr(self.space, "field_bound", None)
        if fb is not None:
            return fb(self.weight, key)
        return mode_bound(self.weight, self.space.weight(key), self.space.min_weight)

    def out_weight(self, n, key) -> Fraction:
        return self.weight - n - 1 + self.space.weight(key)

    def act(self, n: int, key) -> Vector:
        if n > self.bound(key):
            return Vector()
        ck = (n, key)
        hit = self._cache.get(ck)
        if hit is None:
            if self.limit is not None and self.out_weight(n, key) > self.limit:
                raise UndeterminedAboveCutoff(
                    f"{self.name}_({n}) on {self.space.name(key)} needs weight "
                    f"{self.out_weight(n, key)} > {self.limit}")
            hit = self._action(n, key)
            self._cache[ck] = hit
        return hit

    def apply(self, n: int, vec: dict) -> Vector:
        out = Vector()
        for k, c in vec.items():
            out.add_scaled(self.act(n, k), c)
        return out

    def mode(self, n: int) -> GradedMap:
        return GradedMap(self.space, self.weight - n - 1, self.parity,
                         lambda key, n=n: self.act(n, key))

    def mode_range(self, key, cutoff) -> range:
        """Modes whose output on key has weight in [min_weight, cutoff]."""
        lo = math.ceil(self.weight - 1 + self.space.weight(key) - Fraction(cutoff))
        return range(lo, self.bound(key) + 1)


def identity_field(space: GradedSpace) -> Field:
    def action(n, key):
        return Vector.basis(key) if n == -1 else Vector()

    return Field(space, 0, 0, action, name="1")


def derivative_field(a: Field, k: int = 1) -> Field:
    """Divided-power derivative: (d^{(k)} a)_(n) = (-1)^k binom(n, k) a_(n-k)."""
    sign = -1 if k % 2 else 1

    def action(n, key):
        c = sign * binom(n, k)
        return a.act(n - k, key).scale(c) if c else Vector()

    return Field(a.space, a.weight + k, a.parity, action, name=f"d^({k}){a.name}")


def nth_product(a: Field, b: Field, n: int) -> Field:
    """Field a(z)_(n) b(z) for any integer n.

    (a_(n)b)_(m) = sum_i (-1)^i binom(n,i) [a_(n-i) b_(m+i) - zeta (-1)^n b_(n+m-i) a_(i)];
    both sums are finite on a fixed vector by boundedness.
    """
    if a.space is not b.space:
        raise ValueError("fields act on different spaces")
    zeta = supersign(a.parity, b.parity)
    sign_n = -1 if n % 2 else 1

    def action(m, key):
        out = Vector()
        # first sum: b_(m+i) v vanishes once m + i exceeds its bound
        top = b.bound(key) - m
        if n >= 0:
            top = min(top, n)
        for i in range(0, top + 1):
            c = binom(n, i)
            if not c:
                continue
            c = -c if i % 2 else c
            out.add_scaled(a.apply(n - i, b.act(m + i, key)), c)
        top = a.bound(key)
        if n >= 0:
            top = min(top, n)
        for i in range(0, top + 1):
            c = binom(n, i)
            if not c:
                continue
            c = -c if i % 2 else c
            out.add_scaled(b.apply(n + m - i, a.act(i, key)), -zeta * sign_n * c)
        return out

    return Field(a.space, a.weight + b.weight - n - 1, (a.parity + b.parity) % 2, action,
                 name=f"({a.name})_({n})({b.name})")


def normal_ordered(a: Field, b: Field) -> Field:
    return nth_product(a, b, -1)


def field_witness(f: Field, cutoff):
    """First (n, basis key, value) where f is nonzero on the cutoff window, or None."""
    for key in f.space.basis(cutoff):
        for n in f.mode_range(key, cutoff):
            v = f.act(n, key)
            if v:
                return n, key, v
    return None


def field_is_zero(f: Field, cutoff) -> bool:
    return field_witness(f, cutoff) is None


def fields_agree(f: Field, g: Field, cutoff):
    """(True, None) or (False, witness) comparing all modes on the cutoff window."""
    for key in f.space.basis(cutoff):
        lo = min(f.mode_range(key, cutoff).start, g.mode_range(key, cutoff).start)
        hi = max(f.bound(key), g.bound(key))
        for n in range(lo, hi + 1):
            x, y = f.act(n, key), g.act(n, key)
            if x != y:
                return False, (n, key, x, y)
    return True, None


def commutator(a: Field, b: Field, p: int, q: int, key) -> Vector:
    """[a_(p), b_(q)] applied to a basis key (super-commutator)."""
    zeta = supersign(a.parity, b.parity)
    return a.apply(p, b.act(q, key)).add_scaled(b.apply(q, a.act(p, key)), -zeta)


@dataclass(frozen=True)
class LocalityResult:
    """Least N with (z-w)^N [a(z), b(w)] = 0 on the determinable window.

    ``order`` is None when no N up to ``searched`` works.  When the
    commutator itself vanishes the order is 0 and ``commutator_vanishes``
    is set, which distinguishes "commute up to cutoff" from order 0 in
    the weaker sense.
    """

    order: int | None
    commutator_vanishes: bool
    cutoff: object
    searched: int

    @property
    def is_local(self) -> bool:
        return self.order is not None


def _locality_windows(a: Field, b: Field, key, cutoff, n_order):
    """Index pairs (p, q) whose (z-w)^N-coefficient needs only intermediates <= cutoff."""
    space = a.space
    wv = space.weight(key)
    p_lo = math.ceil(a.weight + wv - 1 - Fraction(cutoff))
    q_lo = math.ceil(b.weight + wv - 1 - Fraction(cutoff))
    s_hi = math.floor(a.weight + b.weight + wv - 2 - space.min_weight)
    s_lo = math.ceil(a.weight + b.weight + wv - 2 - Fraction(cutoff))
    for s in range(s_lo - n_order, s_hi - n_order + 1):
        for p in range(p_lo, s - q_lo + 1):
            yield p, s - p


def locality_order(a: Field, b: Field, cutoff, max_order: int = 16) -> LocalityResult:
    """Least N >= 0 with sum_i (-1)^i binom(N,i) [a_(p+N-i), b_(q+i)] v = 0 everywhere."""
    basis = a.space.basis(cutoff)
    comm_cache: dict = {}

    def comm(p, q, key):
        ck = (p, q, key)
        if ck not in comm_cache:
            comm_cache[ck] = commutator(a, b, p, q, key)
        return comm_cache[ck]

    def annihilated(N):
        for key in basis:
            for p, q in _locality_windows(a, b, key, cutoff, N):
                acc = Vector()
                for i in range(N + 1):
                    c = binom(N, i)
                    acc.add_scaled(comm(p + N - i, q + i, key), -c if i % 2 else c)
                if acc:
                    return False
        return True

    for N in range(max_order + 1):
        if annihilated(N):
            return LocalityResult(N, N == 0, cutoff, max_order)
    return LocalityResult(None, False, cutoff, max_order)


def ope_singular(a: Field, b: Field, cutoff, max_order: int = 16) -> list:
    """Nonzero OPE coefficients [(n, a_(n)b)] for 0 <= n < locality order, descending n."""
    res = locality_order(a, b, cutoff, max_order)
    if res.order is None:
        raise ValueError(f"{a.name}, {b.name} not local up to order {max_order} at cutoff {cutoff}")
    out = []
    for n in range(res.order - 1, -1, -1):
        f = nth_product(a, b, n)
        if not field_is_zero(f, cutoff):
            out.append((n, f))
    return out


def commutator_from_ope(ope: list, p: int, q: int, key) -> Vector:
    """[a_(p), b_(q)] v rebuilt as sum_n binom(p, n) (a_(n)b)_(p+q-n) v."""
    out = Vector()
    for n, f in ope:
        c = binom(p, n)
        if c:
            out.add_scaled(f.act(p + q - n, key), c)
    return out


def dong_bound(n_ab: int, n_bc: int, n_ac: int, n: int) -> int:
    return max(n_ab + n_bc + n_ac - n - 1, 0)


# ---------------------------------------------------------------------------
# identity checkers over a state-field correspondence

IDENTITY_KINDS = ("jacobi", "duality", "locality", "associativity_formula", "commutator_formula")


def pole_order(alg: StateFieldAlgebra, a, b) -> int:
    """1 + largest n with a_(n)b != 0 (0 if none), for basis keys a, b."""
    for n in range(alg.bound(a, b), -1, -1):
        if alg.product({a: 1}, n, {b: 1}):
            return n + 1
    return 0


def _bound(alg, a, c) -> int:
    return alg.bound(a, c)


def _jacobi_sides(alg, a, b, c, r, s, t, zeta):
    A, B, C = {a: 1}, {b: 1}, {c: 1}
    lhs = Vector()
    for i in range(0, _bound(alg, a, b) - r + 1):
        co = binom(t, i)
        if co:
            lhs.add_scaled(alg.product(alg.product(A, r + i, B), s + t - i, C), co)
    rhs = Vector()
    sign_r = -1 if r % 2 else 1
    top = _bound(alg, b, c) - s
    if r >= 0:
        top = min(top, r)
    for i in range(0, top + 1):
        co = binom(r, i)
        if co:
            co = -co if i % 2 else co
            rhs.add_scaled(alg.product(A, t + r - i, alg.product(B, s + i, C)), co)
    top = _bound(alg, a, c) - t
    if r >= 0:
        top = min(top, r)
    for i in range(0, top + 1):
        co = binom(r, i)
        if co:
            co = -co if i % 2 else co
            rhs.add_scaled(alg.product(B, s + r - i, alg.product(A, t + i, C)),
                           -zeta * sign_r * co)
    return lhs, rhs


def _duality_sides(alg, a, b, c, r, s, t):
    A, B, C = {a: 1}, {b: 1}, {c: 1}
    lhs = Vector()
    for i in range(0, _bound(alg, a, b) - r + 1):
        co = binom(t, i)
        if co:
            lhs.add_scaled(alg.product(alg.product(A, r + i, B), s + t - i, C), co)
    rhs = Vector()
    top = _bound(alg, b, c) - s
    if r >= 0:
        top = min(top, r)
    for i in range(0, top + 1):
        co = binom(r, i)
        if co:
            rhs.add_scaled(alg.product(A, t + r - i, alg.product(B, s + i, C)),
                           -co if i % 2 else co)
    return lhs, rhs


def _locality_sides(alg, a, b, c, r, s, t, zeta):
    _, rhs = _jacobi_sides(alg, a, b, c, r, s, t, zeta)
    return Vector(), rhs


def _assoc_sides(alg, a, b, c, r, s, zeta):
    lhs = alg.product(alg.product({a: 1}, r, {b: 1}), s, {c: 1})
    _, rhs = _jacobi_sides(alg, a, b, c, r, s, 0, zeta)
    return lhs, rhs


def _commutator_sides(alg, a, b, c, s, t, zeta):
    A, B, C = {a: 1}, {b: 1}, {c: 1}
    lhs = alg.product(A, t, alg.product(B, s, C))
    lhs.add_scaled(alg.product(B, s, alg.product(A, t, C)), -zeta)
    rhs = Vector()
    top = min(_bound(alg, a, b), t) if t >= 0 else _bound(alg, a, b)
    for i in range(0, top + 1):
        co = binom(t, i)
        if co:
            rhs.add_scaled(alg.product(alg.product(A, i, B), t + s - i, C), co)
    return lhs, rhs


def check_identity(kind: str, alg: StateFieldAlgebra, a, b, c, rs, ss, ts, cutoff,
                   report: Report | None = None, poles: dict | None = None) -> Report:
    """Sweep one holomorphic identity over index ranges for basis states a, b, c.

    Index tuples whose output or whose visible intermediates (a_(r)b,
    b_(s)c, a_(t)c) exceed the cutoff are counted as skipped.  Tuples
    whose output weight is below the minimum weight are vacuous (both
    sides vanish by grading) and are counted separately.  For duality
    and locality only t >= pole order of (a, c), resp. r >= pole order of
    (a, b), are in scope.
    """
    if kind not in IDENTITY_KINDS:
        raise ValueError(f"unknown identity kind {kind!r}")
    report = report or Report(f"{kind} sweep", cutoff=cutoff)
    wa, wb, wc = alg.weight(a), alg.weight(b), alg.weight(c)
    zeta = supersign(alg.parity(a), alg.parity(b))
    cutoff = Fraction(cutoff)
    mw = alg.min_weight
    poles = poles if poles is not None else {}

    def pole(x, y):
        if (x, y) not in poles:
            poles[(x, y)] = pole_order(alg, x, y)
        return poles[(x, y)]

    if kind == "associativity_formula":
        ts = [0]
    if kind == "commutator_formula":
        rs = [0]
    ss = list(ss)
    # integer thresholds for the weight conditions (all weights enter as sums)
    r0 = math.ceil(wa + wb - 1 - cutoff)
    s0 = math.ceil(wb + wc - 1 - cutoff)
    t0 = math.ceil(wa + wc - 1 - cutoff)
    u0 = math.ceil(wa + wb + wc - 2 - cutoff)
    u1 = math.floor(wa + wb + wc - 2 - mw)
    below = not alg.bounded_below
    r1 = math.floor(wa + wb - 1 - mw)
    s1 = math.floor(wb + wc - 1 - mw)
    t1 = math.floor(wa + wc - 1 - mw)
    for r in rs:
        if kind == "locality" and r < pole(a, b):
            continue
        for t in ts:
            if kind == "duality" and t < pole(a, c):
                continue
            if below:
                run = []
                for s in ss:
                    u = r + s + t
                    if u < u0 or r < r0 or s < s0 or t < t0 or u > u1 or r > r1 or s > s1 or t > t1:
                        report.tally(kind, SKIP)
                    else:
                        run.append(s)
            elif r < r0 or t < t0:
                report.tally(kind, SKIP, len(ss))
                continue
            else:
                # count the skipped and vacuous s in bulk; only the rest is evaluated
                lo_s, hi_s = max(s0, u0 - r - t), u1 - r - t
                n_skip = sum(1 for s in ss if s < lo_s)
                run = [s for s in ss if lo_s <= s <= hi_s]
                if n_skip:
                    report.tally(kind, SKIP, n_skip)
                report.vacuous += len(ss) - n_skip - len(run)
            for s in run:
                if kind == "jacobi":
                    lhs, rhs = _jacobi_sides(alg, a, b, c, r, s, t, zeta)
                elif kind == "duality":
                    lhs, rhs = _duality_sides(alg, a, b, c, r, s, t)
                elif kind == "locality":
                    lhs, rhs = _locality_sides(alg, a, b, c, r, s, t, zeta)
                elif kind == "associativity_formula":
                    lhs, rhs = _assoc_sides(alg, a, b, c, r, s, zeta)
                else:
                    lhs, rhs = _commutator_sides(alg, a, b, c, s, t, zeta)
                if lhs == rhs:
                    report.tally(kind, PASS)
                else:
                    idx = {"a": alg.name(a), "b": alg.name(b), "c": alg.name(c),
                           "r": r, "s": s, "t": t}
                    diff = lhs - rhs
                    report.add(CheckRecord(kind, idx, FAIL, witness=alg.name(next(iter(diff))),
                                           lhs=lhs.render(alg.name), rhs=rhs.render(alg.name)))
    return report


def translation_power(alg: StateFieldAlgebra, vec: dict, i: int) -> Vector:
    """Divided power T^{(i)} applied to vec."""
    out = Vector(vec)
    for _ in range(i):
        out = alg.T(out)
    return out.scale(divided_power_factor(i))


def check_skew_symmetry(alg: StateFieldAlgebra, a, b, ns, cutoff,
                        report: Report | None = None) -> Report:
    """zeta b_(n)a = sum_i (-1)^{n+1+i} T^{(i)}(a_(n+i)b) for n in ns."""
    report = report or Report("skew-symmetry sweep", cutoff=cutoff)
    zeta = supersign(alg.parity(a), alg.parity(b))
    wa, wb = alg.weight(a), alg.weight(b)
    for n in ns:
        idx = {"a": alg.name(a), "b": alg.name(b), "n": n}
        out_w = wa + wb - n - 1
        if out_w > Fraction(cutoff) or (not alg.bounded_below and out_w < alg.min_weight):
            report.tally("skew_symmetry", SKIP)
            continue
        if out_w < alg.min_weight:
            report.vacuous += 1
            continue
        lhs = alg.product({b: 1}, n, {a: 1}).scale(zeta)
        rhs = Vector()
        for i in range(0, _bound(alg, a, b) - n + 1):
            sign = -1 if (n + 1 + i) % 2 else 1
            rhs.add_scaled(translation_power(alg, alg.product({a: 1}, n + i, {b: 1}), i), sign)
        if lhs == rhs:
            report.tally("skew_symmetry", PASS)
        else:
            report.add(CheckRecord("skew_symmetry", idx, FAIL,
                                   witness=alg.name(next(iter(lhs - rhs))),
                                   lhs=lhs.render(alg.name), rhs=rhs.render(alg.name)))
    return report
