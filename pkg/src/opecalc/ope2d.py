"""Two-variable OPE calculus.

The OPE-algebras built here are tensor products V (x) V' of a chiral vertex
algebra (modes in z) and an antichiral one (modes in zbar).  A state
``a (x) a'`` has the two-variable field ``a(z) (x) a'(zbar)`` with modes

    (a (x) a')_(n, nbar) (c (x) c') = zeta(a', c) a_(n)c (x) a'_(nbar)c'.

All mode indices and pole orders are integer pairs.  Every check is written
against the abstract :class:`Field2` interface, so nothing below relies on
the tensor factorization except the state space itself.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from itertools import product as iproduct
from typing import Callable

from .distribution import Distribution, Window
from .fieldcalc import Vector, mode_bound, pole_order
from .numcore import binom, exact, supersign
from .report import FAIL, PASS, UNDETERMINED, CheckRecord, Report

Z, ZB, W, WB = "z", "zbar", "w", "wbar"


def _sgn(k: int) -> int:
    return -1 if k % 2 else 1


def _ints(lo, hi) -> range:
    return range(math.ceil(lo), math.floor(hi) + 1)


class NotAdditivelyLocal(ValueError):
    """Raised when a construction needs an additive-locality order that is missing."""


# ---------------------------------------------------------------------------
# state space


class OpeAlgebra2:
    """Chiral (x) antichiral tensor product with (h, hbar)-graded basis keys ``(k, kbar)``."""

    bounded_below = True

    def __init__(self, left, right, cutoff=(3, 3), name: str | None = None):
        self.left, self.right = left, right
        self.cutoff = (exact(cutoff[0]), exact(cutoff[1]))
        self.min_weight = (exact(left.min_weight), exact(right.min_weight))
        self.name_ = name or f"{left.name_}(x){right.name_}bar"
        self._prod: dict = {}
        self._fields: dict = {}

    # graded space
    def weight(self, key) -> tuple:
        return (self.left.weight(key[0]), self.right.weight(key[1]))

    def parity(self, key) -> int:
        return (self.left.parity(key[0]) + self.right.parity(key[1])) % 2

    def name(self, key) -> str:
        return f"{self.left.name(key[0])}(x){self.right.name(key[1])}"

    def basis(self, cutoff=None) -> list:
        c = self.cutoff if cutoff is None else (Fraction(cutoff[0]), Fraction(cutoff[1]))
        return [(k1, k2) for k1 in self.left.basis(c[0]) for k2 in self.right.basis(c[1])]

    def character(self, cutoff=None) -> dict:
        out: dict = {}
        for key in self.basis(cutoff):
            w = self.weight(key)
            out[w] = out.get(w, 0) + 1
        return dict(sorted(out.items()))

    def bound(self, a, c) -> tuple:
        return (self.left.bound(a[0], c[0]), self.right.bound(a[1], c[1]))

    # products
    def state_product(self, a, n, c) -> Vector:
        ck = (a, n, c)
        hit = self._prod.get(ck)
        if hit is not None:
            return hit
        (a1, a2), (c1, c2) = a, c
        out = Vector()
        x = self.left.state_product(a1, n[0], c1)
        if x:
            y = self.right.state_product(a2, n[1], c2)
            if y:
                zeta = supersign(self.right.parity(a2), self.left.parity(c1))
                for k1, v1 in x.items():
                    for k2, v2 in y.items():
                        out.add_scaled({(k1, k2): v1 * v2}, zeta)
        self._prod[ck] = out
        return out

    def product(self, a: dict, n, c: dict) -> Vector:
        out = Vector()
        for ka, ca in a.items():
            for kc, cc in c.items():
                out.add_scaled(self.state_product(ka, n, kc), ca * cc)
        return out

    def T(self, vec: dict) -> Vector:
        out = Vector()
        for (k1, k2), c in vec.items():
            for j, v in self.left.T({k1: 1}).items():
                out.add_scaled({(j, k2): v}, c)
        return out

    def Tbar(self, vec: dict) -> Vector:
        out = Vector()
        for (k1, k2), c in vec.items():
            for j, v in self.right.T({k2: 1}).items():
                out.add_scaled({(k1, j): v}, c)
        return out

    def translation_power(self, vec: dict, i: int, ib: int) -> Vector:
        """T^(i) Tbar^(ib) with divided powers."""
        out = Vector(vec)
        for _ in range(i):
            out = self.T(out)
        for _ in range(ib):
            out = self.Tbar(out)
        return out.scale(Fraction(1, math.factorial(i) * math.factorial(ib)))

    def drop_derived(self) -> None:
        """Forget memoised compositions and bracket modes on the cached fields."""
        for f in self._fields.values():
            f._derived.clear()

    # states
    def vacuum_key(self):
        return (next(iter(self.left.vacuum())), next(iter(self.right.vacuum())))

    def vacuum(self) -> Vector:
        return Vector({self.vacuum_key(): 1})

    def key(self, left_gen: str | None = None, right_gen: str | None = None):
        """Key of g (x) gbar; ``None`` on a side means the vacuum there."""
        k1 = next(iter(self.left.gen_state(left_gen))) if left_gen else next(iter(self.left.vacuum()))
        k2 = next(iter(self.right.gen_state(right_gen))) if right_gen else next(iter(self.right.vacuum()))
        return (k1, k2)

    def tensor(self, u: dict, v: dict) -> Vector:
        out = Vector()
        for k1, c1 in u.items():
            for k2, c2 in v.items():
                out.add_scaled({(k1, k2): c1 * c2})
        return out

    def pole_orders(self, a, b) -> tuple:
        """Per-component holomorphic pole orders of the basis keys a, b."""
        return (pole_order(self.left, a[0], b[0]), pole_order(self.right, a[1], b[1]))

    def Y(self, vec: dict, name: str | None = None) -> "Field2":
        vec = Vector(vec)
        if len(vec) == 1:
            k = next(iter(vec))
            if vec[k] == 1 and name is None:
                hit = self._fields.get(k)
                if hit is None:
                    hit = self._fields[k] = self._Y(vec, None)
                return hit
        return self._Y(vec, name)

    def _Y(self, vec, name):
        if not vec:
            return Field2(self, (0, 0), 0, lambda n, key: Vector(), name=name or "0")
        ws = {self.weight(k) for k in vec}
        ps = {self.parity(k) for k in vec}
        if len(ws) != 1 or len(ps) != 1:
            raise ValueError("Y needs a homogeneous state")
        return Field2(self, ws.pop(), ps.pop(), lambda n, key: self.product(vec, n, {key: 1}),
                      name=name or self.render(vec))

    def render(self, vec: dict) -> str:
        return Vector(vec).render(self.name)

    def __repr__(self):
        return f"OpeAlgebra2({self.name_}, cutoff={self.cutoff})"


# ---------------------------------------------------------------------------
# fields


class Field2:
    """a(z, zbar) = sum a_(n, nbar) z^{-n-1} zbar^{-nbar-1} acting on an OpeAlgebra2."""

    def __init__(self, space: OpeAlgebra2, weight, parity: int, action: Callable,
                 name: str = "?"):
        self.space = space
        self.weight = (Fraction(weight[0]), Fraction(weight[1]))
        self.parity = parity % 2
        self._action = action
        self.name = name
        self._memo: dict = {}
        self._bounds: dict = {}
        self._derived: dict = {}  # memo for compositions and bracket modes; values are shared

    def bound(self, key) -> tuple:
        """Certificate: a_(n, nbar) key = 0 once n or nbar exceeds these."""
        b = self._bounds.get(key)
        if b is None:
            wv = self.space.weight(key)
            mw = self.space.min_weight
            b = self._bounds[key] = (mode_bound(self.weight[0], wv[0], mw[0]),
                                     mode_bound(self.weight[1], wv[1], mw[1]))
        return b

    def act(self, n, key) -> Vector:
        n = (int(n[0]), int(n[1]))
        b = self.bound(key)
        if n[0] > b[0] or n[1] > b[1]:
            return Vector()
        ck = (n, key)
        hit = self._memo.get(ck)
        if hit is None:
            hit = self._memo[ck] = Vector(self._action(n, key))
        return hit

    def apply(self, n, vec: dict) -> Vector:
        out = Vector()
        for k, c in vec.items():
            out.add_scaled(self.act(n, k), c)
        return out

    def dz(self) -> "Field2":
        return Field2(self.space, (self.weight[0] + 1, self.weight[1]), self.parity,
                      lambda n, key: self.act((n[0] - 1, n[1]), key).scale(-n[0]),
                      name=f"dz {self.name}")

    def dzbar(self) -> "Field2":
        return Field2(self.space, (self.weight[0], self.weight[1] + 1), self.parity,
                      lambda n, key: self.act((n[0], n[1] - 1), key).scale(-n[1]),
                      name=f"dzbar {self.name}")

    def __repr__(self):
        return f"Field2({self.name}, weight={self.weight})"


def _output_range(h, wv, cutoff, minw) -> range:
    """Mode indices n whose output weight wv + h - n - 1 lies in [minw, cutoff]."""
    return _ints(wv + h - 1 - cutoff, wv + h - 1 - minw)


def _cut(space, cutoff):
    return space.cutoff if cutoff is None else (exact(cutoff[0]), exact(cutoff[1]))


def field_witness2(f: Field2, g: Field2, cutoff=None):
    """First (mode, key) where f and g differ on the window, else None."""
    space = f.space
    cutoff = _cut(space, cutoff)
    mw = space.min_weight
    for key in space.basis(cutoff):
        wv = space.weight(key)
        for h in {f.weight, g.weight}:
            for n in _output_range(h[0], wv[0], cutoff[0], mw[0]):
                for nb in _output_range(h[1], wv[1], cutoff[1], mw[1]):
                    if f.act((n, nb), key) != g.act((n, nb), key):
                        return ((n, nb), key)
    return None


def fields_agree2(f: Field2, g: Field2, cutoff=None) -> bool:
    return field_witness2(f, g, cutoff) is None


# ---------------------------------------------------------------------------
# additive locality


def locality_defect(a: Field2, b: Field2, r, t, s, key) -> Vector:
    """Mode (t, s) of (z-w)^r [a(z), b(w)] on key, radially ordered, r in N^2."""
    zeta = supersign(a.parity, b.parity)
    sgn = _sgn(r[0] - r[1])
    out = Vector()
    for i, ib in iproduct(range(r[0] + 1), range(r[1] + 1)):
        c = binom(r[0], i) * binom(r[1], ib) * _sgn(i + ib)
        x = b.act((s[0] + i, s[1] + ib), key)
        if x:
            out.add_scaled(a.apply((t[0] + r[0] - i, t[1] + r[1] - ib), x), c)
        y = a.act((t[0] + i, t[1] + ib), key)
        if y:
            out.add_scaled(b.apply((s[0] + r[0] - i, s[1] + r[1] - ib), y), -c * zeta * sgn)
    return out


def _locality_window(a: Field2, b: Field2, r, key, cutoff):
    """(t, s) pairs whose intermediate and output weights stay within the window."""
    space = a.space
    wv = space.weight(key)
    mw = space.min_weight
    per = []
    for c in (0, 1):
        ha, hb, C, m = a.weight[c], b.weight[c], cutoff[c], mw[c]
        pairs = []
        for s in _ints(wv[c] + hb - 1 - C, wv[c] + hb - 1 - m):
            top = wv[c] + ha + hb - s - r[c] - 2
            for t in _ints(max(wv[c] + ha - 1 - C, top - C), top - m):
                pairs.append((t, s))
        per.append(pairs)
    for (t, s), (tb, sb) in iproduct(*per):
        yield (t, tb), (s, sb)


def _locality_scan(a: Field2, b: Field2, r, cutoff):
    """(witness or None, number of mode pairs examined)."""
    space = a.space
    checked = 0
    for key in space.basis(cutoff):
        for t, s in _locality_window(a, b, r, key, cutoff):
            checked += 1
            d = locality_defect(a, b, r, t, s, key)
            if d:
                return (r, t, s, key, d), checked
    return None, checked


def is_additively_local(a: Field2, b: Field2, r, cutoff=None):
    """None if (z-w)^r [a, b] vanishes on the window, else a witness tuple.

    An order so large that no mode pair fits in the window is vacuously
    local here; ``additive_locality_order`` does not accept such orders.
    """
    return _locality_scan(a, b, r, _cut(a.space, cutoff))[0]


@dataclass
class AdditiveLocality:
    order: tuple | None
    minimal: list
    cutoff: tuple
    searched: tuple

    @property
    def local(self) -> bool:
        return bool(self.minimal)


def additive_locality_order(a: Field2, b: Field2, cutoff=None, max_order=(6, 6),
                            coset=(0, 0)) -> AdditiveLocality:
    """Least r in coset + N^2 with (z-w)^r [a(z), b(w)] = 0 on the window.

    Only the integer coset is supported.  The set of valid orders is upward
    closed; its minimal elements are returned, and ``order`` is set when there
    is a single one.  Orders whose window holds no mode pair prove nothing
    and are passed over.  ``order is None`` with no minimal elements means the
    pair is not additively local up to ``max_order`` on this window.
    """
    if tuple(coset) != (0, 0):
        raise ValueError("only integer pole-order cosets occur in these algebras")
    cutoff = _cut(a.space, cutoff)
    stair = []
    hb_top = max_order[1]
    for h in range(max_order[0] + 1):
        found = None
        for hb in range(0, hb_top + 1):
            wit, checked = _locality_scan(a, b, (h, hb), cutoff)
            if wit is None and checked:
                found = hb
                break
        if found is not None:
            if not stair or found < stair[-1][1]:
                stair.append((h, found))
            hb_top = found
            if found == 0:
                break
    order = stair[0] if len(stair) == 1 else None
    return AdditiveLocality(order, stair, cutoff, tuple(max_order))


def _order_of(a: Field2, b: Field2, order, cutoff=None) -> tuple:
    if order is not None:
        return (int(order[0]), int(order[1]))
    res = additive_locality_order(a, b, cutoff)
    if res.order is None:
        raise NotAdditivelyLocal(f"{a.name}, {b.name}: no single additive-locality order"
                                 f" (minimal orders {res.minimal})")
    return res.order


# ---------------------------------------------------------------------------
# bracket modes


def compose(a: Field2, b: Field2, n, m, key) -> Vector:
    """a_(n) b_(m) key, memoised on a; the result is shared and must not be mutated."""
    ck = (2, b, n, m, key)
    hit = a._derived.get(ck)
    if hit is None:
        x = b.act(m, key)
        hit = a._derived[ck] = a.apply(n, x) if x else Vector()
    return hit


def bracket_mode_z(a: Field2, b: Field2, n, m, key, h: int) -> Vector:
    """a_{[n, nbar} b_{m], mbar} on key: modes of a(z)b(w) re-expanded for w > z.

    ``h`` is the z-component of an additive-locality order of (a, b).  The
    j-sum stops once n + j passes the boundedness certificate of a on key.
    """
    ck = (0, b, n, m, key, h)
    hit = a._derived.get(ck)
    if hit is not None:
        return hit
    out = Vector()
    top = a.bound(key)[0] - n[0]
    for j in range(top + 1):
        cj = binom(-h, j) * _sgn(j)
        for i in range(h + 1):
            c = cj * binom(h, i) * _sgn(i)
            out.add_scaled(compose(a, b, (n[0] + h - i + j, n[1]), (m[0] + i - h - j, m[1]), key), c)
    out = a._derived[ck] = out.scale(_sgn(h))
    return out


def bracket_mode_zbar(a: Field2, b: Field2, n, m, key, hb: int) -> Vector:
    """a_{n, [nbar} b_{m, mbar]} on key: modes re-expanded for wbar > zbar."""
    ck = (1, b, n, m, key, hb)
    hit = a._derived.get(ck)
    if hit is not None:
        return hit
    out = Vector()
    top = a.bound(key)[1] - n[1]
    for j in range(top + 1):
        cj = binom(-hb, j) * _sgn(j)
        for i in range(hb + 1):
            c = cj * binom(hb, i) * _sgn(i)
            out.add_scaled(compose(a, b, (n[0], n[1] + hb - i + j), (m[0], m[1] + i - hb - j), key), c)
    out = a._derived[ck] = out.scale(_sgn(hb))
    return out


def bracket_consistency(a: Field2, b: Field2, n, m, key, order) -> tuple:
    """Both sides of a_{[n,nbar}b_{m],mbar} = zeta b_{m,[mbar}a_{n,nbar]} on key."""
    lhs = bracket_mode_z(a, b, n, m, key, order[0])
    rhs = bracket_mode_zbar(b, a, m, n, key, order[1]).scale(supersign(a.parity, b.parity))
    return lhs, rhs


# ---------------------------------------------------------------------------
# reduced OPE and n-th products


def numerator_mode(a: Field2, b: Field2, order, m, p, key) -> Vector:
    """Mode (m, p) of N(z, w) = (z-w)^order a(z) b(w) on key."""
    out = Vector()
    h, hb = order
    for i, ib in iproduct(range(h + 1), range(hb + 1)):
        c = binom(h, i) * binom(hb, ib) * _sgn(i + ib)
        x = b.act((p[0] + i, p[1] + ib), key)
        if x:
            out.add_scaled(a.apply((m[0] + h - i, m[1] + hb - ib), x), c)
    return out


@dataclass
class OpeTerm:
    """One term N(z, w) / (z-w)^pole of an OPE, the numerator stored per basis vector."""

    pole: tuple
    numerators: dict
    reduced: bool | None = None
    label: str = ""

    def numerator(self, key) -> Distribution:
        return self.numerators[key]


def _numerator_distribution(a, b, order, key, depth) -> Distribution:
    ba, bb = a.bound(key), b.bound(key)
    terms = {}
    for m, mb in iproduct(range(ba[0] - depth, ba[0] + 1), range(ba[1] - depth, ba[1] + 1)):
        for p, pb in iproduct(range(bb[0] - depth, bb[0] + 1), range(bb[1] - depth, bb[1] + 1)):
            v = numerator_mode(a, b, order, (m, mb), (p, pb), key)
            if v:
                terms[(-m - 1, -mb - 1, -p - 1, -pb - 1)] = v
    win = Window({Z: (-ba[0] - 1, -ba[0] - 1 + depth), ZB: (-ba[1] - 1, -ba[1] - 1 + depth),
                  W: (-bb[0] - 1, -bb[0] - 1 + depth), WB: (-bb[1] - 1, -bb[1] - 1 + depth)})
    return Distribution((Z, ZB, W, WB), terms, win)


def reduced_ope(a: Field2, b: Field2, order=None, cutoff=None, depth: int = 4) -> list:
    """The reduced OPE a(z)b(w) = N(z, w) / (z-w)^order, windowed.

    With integer pole orders all terms share one Z^2-coset, so the reduced
    OPE has at most one term.  Numerators are stored for every basis vector
    up to the cutoff, each on a box of ``depth + 1`` modes per variable below
    the boundedness certificates.  An all-zero numerator gives ``[]``.
    """
    cutoff = _cut(a.space, cutoff)
    order = _order_of(a, b, order, cutoff)
    nums = {key: _numerator_distribution(a, b, order, key, depth)
            for key in a.space.basis(cutoff)}
    if all(d.is_zero() for d in nums.values()):
        return []
    reduced = None
    if order[0] > 0 or order[1] > 0:
        # N divisible by (z-w) iff every a_(h-1, .)b vanishes; same for zbar
        div_z = order[0] > 0 and _all_products_vanish(a, b, order, 0, cutoff)
        div_zb = order[1] > 0 and _all_products_vanish(a, b, order, 1, cutoff)
        reduced = not (div_z or div_zb)
    return [OpeTerm(order, nums, reduced, f"{a.name} {b.name}")]


def _all_products_vanish(a, b, order, comp, cutoff) -> bool:
    space = a.space
    other = 1 - comp
    lo = -1 - int(cutoff[other]) - 4
    for nn in range(lo, order[other] + 1):
        n = [0, 0]
        n[comp] = order[comp] - 1
        n[other] = nn
        if not field_is_zero2(nth_product2(a, b, tuple(n), order), cutoff):
            return False
    return True


def field_is_zero2(f: Field2, cutoff=None) -> bool:
    space = f.space
    cutoff = _cut(space, cutoff)
    mw = space.min_weight
    for key in space.basis(cutoff):
        wv = space.weight(key)
        for n in _output_range(f.weight[0], wv[0], cutoff[0], mw[0]):
            for nb in _output_range(f.weight[1], wv[1], cutoff[1], mw[1]):
                if f.act((n, nb), key):
                    return False
    return True


def reconstruct_check(a: Field2, b: Field2, terms: list, cutoff=None,
                      report: Report | None = None) -> Report:
    """Compare a_(t)b_(s) key with the modes of N / (z-w)^pole expanded for z > w.

    For each s the t range is the widest one whose expansion only reads
    stored numerator modes, so the entries (m, p) constrained are those with
    m - (ba - depth) >= bb - p componentwise; deeper corners of the stored
    box are not tested.
    """
    space = a.space
    cutoff = _cut(space, cutoff)
    report = report or Report(f"reduced OPE reconstruction {a.name} {b.name}", cutoff)
    for key in space.basis(cutoff):
        ba, bb = a.bound(key), b.bound(key)
        if terms:
            (term,) = terms
            h, hb = term.pole
            num = term.numerator(key)
            win = num.window
            depth = int(win.get(Z)[1] - win.get(Z)[0])
        else:
            h = hb = 0
            num = None
            depth = 4
        s_rng = [range(bb[c] - depth, bb[c] + 1) for c in (0, 1)]
        for s, sb in iproduct(*s_rng):
            t_lo = (ba[0] - depth + h + bb[0] - s, ba[1] - depth + hb + bb[1] - sb)
            t_hi = (ba[0] + h + bb[0] - s + 1, ba[1] + hb + bb[1] - sb + 1)
            for t, tb in iproduct(range(t_lo[0], t_hi[0] + 1), range(t_lo[1], t_hi[1] + 1)):
                direct = a.apply((t, tb), b.act((s, sb), key))
                rebuilt = Vector()
                if num is not None:
                    for i, ib in iproduct(range(bb[0] - s + 1), range(bb[1] - sb + 1)):
                        c = binom(-h, i) * binom(-hb, ib) * _sgn(i + ib)
                        v = num.mode(t - h - i, tb - hb - ib, s + i, sb + ib)
                        if v:
                            rebuilt.add_scaled(v, c)
                ok = direct == rebuilt
                report.add(CheckRecord("reconstruction", {"t": (t, tb), "s": (s, sb), "v": space.name(key)},
                                       PASS if ok else FAIL,
                                       "" if ok else space.render(direct - rebuilt),
                                       "" if ok else space.render(direct),
                                       "" if ok else space.render(rebuilt)))
    return report


def nth_product2(a: Field2, b: Field2, n, order=None, cutoff=None) -> Field2:
    """a_(n, nbar) b by Taylor extraction: the (k, kbar) = order - 1 - n divided
    z-derivative of the numerator, restricted to z = w."""
    order = _order_of(a, b, order, cutoff)
    k = (order[0] - 1 - n[0], order[1] - 1 - n[1])
    wt = (a.weight[0] + b.weight[0] - n[0] - 1, a.weight[1] + b.weight[1] - n[1] - 1)
    par = a.parity + b.parity
    name = f"{a.name}_({n[0]},{n[1]}){b.name}"
    if k[0] < 0 or k[1] < 0:
        return Field2(a.space, wt, par, lambda q, key: Vector(), name=name)

    def action(q, key):
        ba, bb = a.bound(key), b.bound(key)
        out = Vector()
        rng = [range(q[c] - k[c] - 1 - bb[c], ba[c] + 1) for c in (0, 1)]
        for m, mb in iproduct(*rng):
            c = binom(-m - 1, k[0]) * binom(-mb - 1, k[1])
            if not c:
                continue
            v = numerator_mode(a, b, order, (m, mb), (q[0] - m - k[0] - 1, q[1] - mb - k[1] - 1), key)
            if v:
                out.add_scaled(v, c)
        return out

    return Field2(a.space, wt, par, action, name=name)


def _short(V, key) -> str:
    name = V.name(key)
    return name[:-len("_(-1)1")] if name.endswith("_(-1)1") and name.count("_(") == 1 else name


def tensor_ope_terms(alg: OpeAlgebra2, a, b) -> list:
    """Four-term form of the OPE of two pure tensors: products of the two
    one-variable OPEs, regular parts included with pole order 0."""
    from .vertexalg import state_label

    def one_side(V, x, y):
        po = pole_order(V, x, y)
        terms = [(n + 1, state_label(V, V.state_product(x, n, y))) for n in range(po - 1, -1, -1)
                 if V.state_product(x, n, y)]
        terms.append((0, f":{_short(V, x)}{_short(V, y)}:"))
        return terms

    out = []
    for (h, l1), (hb, l2) in iproduct(one_side(alg.left, a[0], b[0]), one_side(alg.right, a[1], b[1])):
        out.append(((h, hb), f"{l1}(x){l2}"))
    return out


# ---------------------------------------------------------------------------
# identity checkers


def _weight(space, key_w, *parts):
    return tuple(sum(p[c] for p in parts) for c in (0, 1))


def _within(w, cutoff) -> bool:
    return w[0] <= cutoff[0] and w[1] <= cutoff[1]


def _below(w, minw) -> bool:
    return w[0] < minw[0] or w[1] < minw[1]


def _box(box):
    lo, hi = box
    return [(x, y) for x in range(lo, hi + 1) for y in range(lo, hi + 1)]


def _rec(report, ident, idx, lhs, rhs, space):
    ok = lhs == rhs
    report.add(CheckRecord(ident, idx, PASS if ok else FAIL,
                           "" if ok else space.render(Vector(lhs) - Vector(rhs)),
                           "" if ok else space.render(lhs), "" if ok else space.render(rhs)))
    return ok


def check_skew_symmetry2(alg: OpeAlgebra2, a, b, ns, cutoff=None, report: Report | None = None) -> Report:
    """zeta b_(n)a = sum_i (-1)^{n - nbar + i + ibar} T^(i) (a_(n+i) b) for basis keys."""
    cutoff = _cut(alg, cutoff)
    report = report or Report("skew-symmetry (two-variable)", cutoff)
    wa, wb = alg.weight(a), alg.weight(b)
    zeta = supersign(alg.parity(a), alg.parity(b))
    bd = alg.bound(a, b)
    for n in ns:
        out_w = (wa[0] + wb[0] - n[0] - 1, wa[1] + wb[1] - n[1] - 1)
        if not _within(out_w, cutoff):
            report.tally("skew_symmetry2", "skip")
            continue
        if _below(out_w, alg.min_weight):
            report.vacuous += 1
            continue
        lhs = alg.state_product(b, n, a).scale(zeta)
        rhs = Vector()
        for i, ib in iproduct(range(bd[0] - n[0] + 1), range(bd[1] - n[1] + 1)):
            x = alg.state_product(a, (n[0] + i, n[1] + ib), b)
            if x:
                rhs.add_scaled(alg.translation_power(x, i, ib), _sgn(n[0] - n[1] + i + ib))
        _rec(report, "skew_symmetry2", {"a": alg.name(a), "b": alg.name(b), "n": n}, lhs, rhs, alg)
    return report


def _nested(alg, A: Field2, akey, bkey, p, q, ckey) -> Vector:
    """(a_(p) b)_(q) c, memoised on A."""
    ck = (3, bkey, p, q, ckey)
    hit = A._derived.get(ck)
    if hit is None:
        x = alg.state_product(akey, p, bkey)
        hit = A._derived[ck] = alg.product(x, q, {ckey: 1}) if x else Vector()
    return hit


def jacobi2_sides(alg, A: Field2, B: Field2, akey, bkey, ckey, r, s, t, order,
                  report: Report | None = None):
    """Both sides of the four-term Jacobi identity on ckey.

    Every bracket-mode evaluation is cross-checked against its mirror
    expression and tallied as ``bracket_consistency`` when a report is given.
    """
    zeta = supersign(A.parity, B.parity)
    lhs = Vector()
    bab = alg.bound(akey, bkey)
    for i, ib in iproduct(range(bab[0] - r[0] + 1), range(bab[1] - r[1] + 1)):
        c = binom(t[0], i) * binom(t[1], ib)
        if c:
            lhs.add_scaled(_nested(alg, A, akey, bkey, (r[0] + i, r[1] + ib),
                                   (s[0] + t[0] - i, s[1] + t[1] - ib), ckey), c)
    bac, bbc = A.bound(ckey), B.bound(ckey)
    imax = max(bbc[0] - s[0], bac[0] - t[0])
    ibmax = max(bbc[1] - s[1], bac[1] - t[1])
    if r[0] >= 0:
        imax = min(imax, r[0])
    if r[1] >= 0:
        ibmax = min(ibmax, r[1])
    rhs = Vector()
    sg_r, sg_rb, sg_rr = _sgn(r[0]), _sgn(r[1]), _sgn(r[0] - r[1])
    consistent = 0
    for i, ib in iproduct(range(imax + 1), range(ibmax + 1)):
        c = binom(r[0], i) * binom(r[1], ib) * _sgn(i + ib)
        if not c:
            continue
        term = Vector(compose(A, B, (t[0] + r[0] - i, t[1] + r[1] - ib), (s[0] + i, s[1] + ib), ckey))
        n1, m1 = (t[0] + i, t[1] + r[1] - ib), (s[0] + r[0] - i, s[1] + ib)
        ck = (4, B, n1, m1, ckey, order)
        hit = A._derived.get(ck)
        if hit is None:
            left, mirror = bracket_consistency(A, B, n1, m1, ckey, order)
            hit = A._derived[ck] = (left, mirror, left == mirror)
        left, mirror, same = hit
        if same:
            consistent += 1
        elif report is not None:
            _rec(report, "bracket_consistency", {"n": n1, "m": m1, "v": alg.name(ckey)},
                 left, mirror, alg)
        term.add_scaled(left, -sg_r)
        n2, m2 = (t[0] + r[0] - i, t[1] + ib), (s[0] + i, s[1] + r[1] - ib)
        term.add_scaled(bracket_mode_zbar(A, B, n2, m2, ckey, order[1]), -sg_rb)
        term.add_scaled(compose(B, A, (s[0] + r[0] - i, s[1] + r[1] - ib), (t[0] + i, t[1] + ib), ckey),
                        zeta * sg_rr)
        rhs.add_scaled(term, c)
    if report is not None and consistent:
        report.tally("bracket_consistency", PASS, consistent)
    return lhs, rhs


def _component_status(alg, a, b, c, k, r, s, t, cutoff):
    wa, wb, wc = alg.weight(a)[k], alg.weight(b)[k], alg.weight(c)[k]
    out = wa + wb + wc - r - s - t - 2
    C = cutoff[k]
    if out > C or wa + wb - r - 1 > C or wb + wc - s - 1 > C or wa + wc - t - 1 > C:
        return "skip"
    return "vacuous" if out < alg.min_weight[k] else "run"


def _jacobi_domain(alg, a, b, c, r, s, t, cutoff):
    """'run', 'skip' or 'vacuous' following the holomorphic sweep rules per component."""
    st = [_component_status(alg, a, b, c, k, r[k], s[k], t[k], cutoff) for k in (0, 1)]
    if "skip" in st:
        return "skip"
    return "vacuous" if "vacuous" in st else "run"


def _index_triples(alg, a, b, c, rs, ss, ts, cutoff):
    """Split the index box into runnable triples plus skip and vacuous counts.

    The weight conditions separate by component, so the box is filtered one
    component at a time instead of tuple by tuple.
    """
    per = []
    for k in (0, 1):
        buckets = {"run": [], "skip": 0, "vacuous": []}
        axes = [sorted({x[k] for x in rs}), sorted({x[k] for x in ss}), sorted({x[k] for x in ts})]
        for r, s, t in iproduct(*axes):
            st = _component_status(alg, a, b, c, k, r, s, t, cutoff)
            if st == "skip":
                buckets["skip"] += 1
            else:
                buckets[st].append((r, s, t))
        per.append(buckets)
    full = [len(rs) * len(ss) * len(ts)]
    run = [(tuple((x[0], y[0])), (x[1], y[1]), (x[2], y[2]))
           for x in per[0]["run"] for y in per[1]["run"]]
    live = [len(p["run"]) + len(p["vacuous"]) for p in per]
    vacuous = live[0] * live[1] - len(run)
    skip = full[0] - live[0] * live[1]
    return run, skip, vacuous


def _is_box(rs, ss, ts) -> bool:
    for xs in (rs, ss, ts):
        a = {x[0] for x in xs}
        b = {x[1] for x in xs}
        if len(xs) != len(a) * len(b):
            return False
    return True


def check_jacobi2(alg: OpeAlgebra2, a, b, c, rs, ss, ts, cutoff=None, report: Report | None = None,
                  order=None) -> Report:
    """Four-term Jacobi identity for basis keys over the given index pairs.

    ``order`` is an additive-locality order of (a, b); by default the
    per-component pole orders, which are valid for pure tensors.
    """
    cutoff = _cut(alg, cutoff)
    report = report or Report("Jacobi identity (two-variable)", cutoff)
    A, B = alg.Y({a: 1}), alg.Y({b: 1})
    order = order or alg.pole_orders(a, b)
    if _is_box(rs, ss, ts):
        run, skip, vacuous = _index_triples(alg, a, b, c, rs, ss, ts, cutoff)
        report.tally("jacobi2", "skip", skip)
        report.vacuous += vacuous
    else:
        run = []
        for r, s, t in iproduct(rs, ss, ts):
            dom = _jacobi_domain(alg, a, b, c, r, s, t, cutoff)
            if dom == "skip":
                report.tally("jacobi2", "skip")
            elif dom == "vacuous":
                report.vacuous += 1
            else:
                run.append((r, s, t))
    for r, s, t in run:
        lhs, rhs = jacobi2_sides(alg, A, B, a, b, c, r, s, t, order, report)
        if lhs == rhs:
            report.tally("jacobi2", PASS)
            continue
        _rec(report, "jacobi2", {"a": alg.name(a), "b": alg.name(b), "c": alg.name(c),
                                 "r": r, "s": s, "t": t}, lhs, rhs, alg)
    return report


def check_additive_duality(alg: OpeAlgebra2, a, b, c, rs, ss, t=None, cutoff=None,
                           report: Report | None = None) -> Report:
    """(w+x)^t (a(x)b)(w)c = (x+w)^t a(x+w)b(w)c coefficientwise.

    t defaults to the boundedness order of a on c, the least t with
    a_(t+i)c = 0 for all i in N^2.
    """
    cutoff = _cut(alg, cutoff)
    report = report or Report("additive duality", cutoff)
    t = tuple(t) if t is not None else alg.pole_orders(a, c)
    bab = alg.bound(a, b)
    B = alg.Y({b: 1})
    A = alg.Y({a: 1})
    bbc = B.bound(c)
    for r, s in iproduct(rs, ss):
        dom = _jacobi_domain(alg, a, b, c, r, s, t, cutoff)
        if dom == "skip":
            report.tally("additive_duality", "skip")
            continue
        if dom == "vacuous":
            report.vacuous += 1
            continue
        lhs = Vector()
        for i, ib in iproduct(range(bab[0] - r[0] + 1), range(bab[1] - r[1] + 1)):
            co = binom(t[0], i) * binom(t[1], ib)
            x = alg.state_product(a, (r[0] + i, r[1] + ib), b)
            if co and x:
                lhs.add_scaled(alg.product(x, (s[0] + t[0] - i, s[1] + t[1] - ib), {c: 1}), co)
        rhs = Vector()
        imax = bbc[0] - s[0] if r[0] < 0 else min(r[0], bbc[0] - s[0])
        ibmax = bbc[1] - s[1] if r[1] < 0 else min(r[1], bbc[1] - s[1])
        for i, ib in iproduct(range(imax + 1), range(ibmax + 1)):
            co = binom(r[0], i) * binom(r[1], ib) * _sgn(i + ib)
            x = B.act((s[0] + i, s[1] + ib), c)
            if co and x:
                rhs.add_scaled(A.apply((t[0] + r[0] - i, t[1] + r[1] - ib), x), co)
        _rec(report, "additive_duality", {"a": alg.name(a), "b": alg.name(b), "c": alg.name(c),
                                          "r": r, "s": s, "t": t}, lhs, rhs, alg)
    return report


def check_translation2(alg: OpeAlgebra2, keys, cutoff=None, report: Report | None = None) -> Report:
    """[T, a_(n)] = -n a_(n-1, nbar), [Tbar, a_(n)] = -nbar a_(n, nbar-1), T 1 = Tbar 1 = 0,
    and creativity a_(-1,-1) 1 = a."""
    cutoff = _cut(alg, cutoff)
    report = report or Report("translation (two-variable)", cutoff)
    vac = alg.vacuum_key()
    _rec(report, "vacuum", {"op": "T 1"}, alg.T(alg.vacuum()), Vector(), alg)
    _rec(report, "vacuum", {"op": "Tbar 1"}, alg.Tbar(alg.vacuum()), Vector(), alg)
    for a in keys:
        A = alg.Y({a: 1})
        _rec(report, "vacuum", {"a": alg.name(a), "op": "a_(-1,-1)1"}, A.act((-1, -1), vac), {a: 1}, alg)
        for v in alg.basis(cutoff):
            wv = alg.weight(v)
            for n in _output_range(A.weight[0], wv[0], cutoff[0], alg.min_weight[0]):
                for nb in _output_range(A.weight[1], wv[1], cutoff[1], alg.min_weight[1]):
                    x = A.act((n, nb), v)
                    lhs = alg.T(x) - A.apply((n, nb), alg.T({v: 1}))
                    rhs = A.act((n - 1, nb), v).scale(-n)
                    _rec(report, "translation", {"a": alg.name(a), "n": (n, nb), "v": alg.name(v)},
                         lhs, rhs, alg)
                    lhs = alg.Tbar(x) - A.apply((n, nb), alg.Tbar({v: 1}))
                    rhs = A.act((n, nb - 1), v).scale(-nb)
                    _rec(report, "translation_bar", {"a": alg.name(a), "n": (n, nb), "v": alg.name(v)},
                         lhs, rhs, alg)
    return report


# ---------------------------------------------------------------------------
# multiple locality


def _poly(orders3) -> dict:
    """Monomials of prod (z_i - z_j)^{h_ij} over three checked variables.

    Keys are 6-tuples of exponents (z, zbar, w, wbar, x, xbar)."""
    out = {(0,) * 6: 1}
    for (i, j), h in orders3.items():
        fac = {}
        for e, eb in iproduct(range(h[0] + 1), range(h[1] + 1)):
            k = [0] * 6
            k[2 * i] += h[0] - e
            k[2 * j] += e
            k[2 * i + 1] += h[1] - eb
            k[2 * j + 1] += eb
            fac[tuple(k)] = binom(h[0], e) * binom(h[1], eb) * _sgn(e + eb)
        new = {}
        for k1, c1 in out.items():
            for k2, c2 in fac.items():
                k = tuple(x + y for x, y in zip(k1, k2))
                new[k] = new.get(k, 0) + c1 * c2
        out = {k: c for k, c in new.items() if c}
    return out


def _koszul(parities, perm) -> int:
    sign = 1
    p = list(perm)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j] and parities[p[i]] and parities[p[j]]:
                sign = -sign
    return sign


def multiple_locality_check(fields: list, orders: dict | None, cutoff=None, box=(-1, 1),
                            report: Report | None = None) -> Report:
    """Compare the polynomial-multiplied products of 2 or 3 fields in every order.

    ``orders`` maps index pairs (i, j), i < j, to integer additive-locality
    orders.  A missing pair or a non-integer order yields an "undetermined"
    record for that permutation: pairwise locality alone is not known to
    imply multiple locality, so nothing is assumed.
    """
    space = fields[0].space
    cutoff = _cut(space, cutoff)
    k = len(fields)
    report = report or Report("multiple locality", cutoff, box)
    pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]
    usable = orders is not None and all(
        orders.get(p) is not None and all(Fraction(x).denominator == 1 and x >= 0 for x in orders[p])
        for p in pairs)
    if not usable:
        for perm in permutations(range(k)):
            if list(perm) != list(range(k)):
                report.add(CheckRecord("multiple_locality", {"perm": perm}, UNDETERMINED,
                                       "pairwise additive-locality orders not all available"))
        return report
    poly = _poly({p: (int(orders[p][0]), int(orders[p][1])) for p in pairs})
    par = [f.parity for f in fields]
    idx = _box(box)
    for key in space.basis(cutoff):
        wv = space.weight(key)
        for modes in iproduct(idx, repeat=k):
            out_w = tuple(wv[c] + sum(f.weight[c] - modes[i][c] - 1 for i, f in enumerate(fields))
                          for c in (0, 1))
            if not _within(out_w, cutoff):
                report.tally("multiple_locality", "skip")
                continue
            if _below(out_w, space.min_weight):
                report.vacuous += 1
                continue
            results = {}
            for perm in permutations(range(k)):
                acc = Vector()
                for mono, c in poly.items():
                    v = Vector({key: 1})
                    for pos in reversed(perm):
                        n = (modes[pos][0] + mono[2 * pos], modes[pos][1] + mono[2 * pos + 1])
                        v = fields[pos].apply(n, v)
                        if not v:
                            break
                    if v:
                        acc.add_scaled(v, c)
                results[perm] = acc.scale(_koszul(par, perm))
            base = results[tuple(range(k))]
            for perm, val in results.items():
                if perm == tuple(range(k)):
                    continue
                _rec(report, "multiple_locality",
                     {"perm": perm, "modes": modes, "v": space.name(key)}, base, val, space)
    return report


# ---------------------------------------------------------------------------
# sweeps and catalog


@dataclass
class Sweep2Config:
    cutoff: tuple = (3, 3)
    index_box: tuple = (-2, 2)
    state_cutoff: tuple | None = None
    kinds: tuple = ("skew_symmetry2", "jacobi2", "additive_duality", "translation", "locality")
    sample: int | None = None
    seed: int = 0
    meta: dict = field(default_factory=dict)


def verify_ope_algebra(alg: OpeAlgebra2, cfg: Sweep2Config | None = None) -> Report:
    """Axiom sweep for a tensor OPE-algebra over basis triples.

    States come from ``state_cutoff`` (default: the cutoff); ``sample`` draws
    that many seeded triples instead of the full cube.
    """
    import random

    cfg = cfg or Sweep2Config()
    cutoff = (Fraction(cfg.cutoff[0]), Fraction(cfg.cutoff[1]))
    report = Report(f"verify {alg.name_}", cutoff, cfg.index_box)
    states = alg.basis(cfg.state_cutoff or cutoff)
    idx = _box(cfg.index_box)
    triples = list(iproduct(states, repeat=3))
    if cfg.sample is not None and cfg.sample < len(triples):
        triples = random.Random(cfg.seed).sample(triples, cfg.sample)
        report.meta["sampled_triples"] = cfg.sample
        report.meta["seed"] = cfg.seed
    report.meta["states"] = len(states)
    if "skew_symmetry2" in cfg.kinds:
        for a, b in iproduct(states, repeat=2):
            check_skew_symmetry2(alg, a, b, idx, cutoff, report)
    if "translation" in cfg.kinds:
        check_translation2(alg, states, cutoff, report)
    if "locality" in cfg.kinds:
        for a, b in iproduct(states, repeat=2):
            A, B = alg.Y({a: 1}), alg.Y({b: 1})
            order = alg.pole_orders(a, b)
            wit = is_additively_local(A, B, order, cutoff)
            report.add(CheckRecord("additive_locality", {"a": alg.name(a), "b": alg.name(b), "order": order},
                                   PASS if wit is None else FAIL, "" if wit is None else repr(wit[:3])))
    # group by c: the composition memos are keyed by c and dropped when it changes
    triples.sort(key=lambda abc: states.index(abc[2]))
    current = None
    for a, b, c in triples:
        if c != current:
            alg.drop_derived()
            current = c
        if "jacobi2" in cfg.kinds:
            check_jacobi2(alg, a, b, c, idx, idx, idx, cutoff, report)
        if "additive_duality" in cfg.kinds:
            check_additive_duality(alg, a, b, c, idx, idx, None, cutoff, report)
    return report


def toroidal_tensor(level=1, level_bar=1, cutoff=(3, 3)) -> OpeAlgebra2:
    """Heisenberg (x) anti-Heisenberg."""
    from .vertexalg import heisenberg

    return OpeAlgebra2(heisenberg(level, cutoff[0]), heisenberg(level_bar, cutoff[1]), cutoff,
                       name="toroidal_tensor")


def fermion_tensor(cutoff=(3, 3)) -> OpeAlgebra2:
    """Free fermion (x) anti-free fermion."""
    from .vertexalg import clifford1

    return OpeAlgebra2(clifford1(1, cutoff[0]), clifford1(1, cutoff[1]), cutoff, name="fermion_tensor")


TENSOR_CATALOG = {"toroidal_tensor": toroidal_tensor, "fermion_tensor": fermion_tensor}
