"""Conformal algebras from linear OPEs and their enveloping vertex algebras.

The state space of an enveloping vertex algebra is the Verma module
spanned by ordered monomials of creation modes ``s_(-m)`` (m >= 1) applied
to the vacuum.  Products of states are computed exactly by recursion:

* a generator mode acting on a monomial commutes past the leading
  creation mode with the mode commutator formula;
* a composite state ``s_(-m) a'`` is reduced with the associativity formula
  (the Jacobi identity at t = 0) to generator modes and modes of ``a'``.

All results are memoized.  A cutoff only limits which basis states are
enumerated; it never truncates a computation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product as iproduct

from .fieldcalc import (IDENTITY_KINDS, Field, Vector, check_identity, check_skew_symmetry,
                        mode_bound, pole_order, translation_power)
from .numcore import Parity, binom, divided_power_factor, exact, render_scalar, supersign
from .report import FAIL, PASS, CheckRecord, Report

KHAT = -1  # generator index standing for the central element k


@dataclass(frozen=True)
class Generator:
    name: str
    parity: int
    weight: Fraction

    def __post_init__(self):
        object.__setattr__(self, "parity", int(Parity.parse(self.parity)))
        object.__setattr__(self, "weight", Fraction(self.weight))


class ConformalAlgebraError(ValueError):
    """Generator data violating the conformal algebra axioms; carries a witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


def _lin_add(acc: dict, other: dict, c=1) -> dict:
    for k, v in other.items():
        nv = acc.get(k, 0) + c * v
        if nv:
            acc[k] = nv
        else:
            acc.pop(k, None)
    return acc


class ConformalAlgebra:
    """Conformal algebra K[T] (x) K^S + K k defined by linear OPEs.

    Elements are dicts ``{(j, g): coeff}`` meaning ``coeff * T^j s_g``; the
    central element is ``(0, KHAT)``.  ``opes[(s, t, n)]`` for generator
    names s, t and n >= 0 holds s_(n) t as such a dict (names accepted in
    place of indices).
    """

    def __init__(self, generators, opes: dict, name: str = "conformal", validate: bool = True,
                 check_range: int | None = None):
        self.generators = tuple(g if isinstance(g, Generator) else Generator(*g)
                                for g in generators)
        self.index = {g.name: i for i, g in enumerate(self.generators)}
        if len(self.index) != len(self.generators):
            raise ValueError("duplicate generator names")
        self.name = name
        self.opes: dict = {}
        for (s, t, n), val in opes.items():
            si, ti = self._idx(s), self._idx(t)
            if n < 0:
                raise ValueError("only n >= 0 products are part of the OPE data")
            elem = {}
            for (j, g), c in val.items():
                gi = KHAT if g in ("k", KHAT) else self._idx(g)
                if gi == KHAT and j:
                    raise ValueError("T annihilates the central element")
                if c:
                    elem[(int(j), gi)] = exact(c)
            if elem:
                self.opes[(si, ti, int(n))] = elem
        self._check_homogeneity()
        self.order = {}
        for (si, ti, n) in self.opes:
            self.order[(si, ti)] = max(self.order.get((si, ti), 0), n + 1)
        self._prod_cache: dict = {}
        if validate:
            failures = self.axiom_failures(check_range)
            if failures:
                kind, wit = failures[0]
                raise ConformalAlgebraError(f"{kind} fails at {wit}", witness=(kind, wit))

    def _idx(self, g):
        if isinstance(g, int):
            return g
        if g not in self.index:
            raise ValueError(f"unknown generator {g!r}")
        return self.index[g]

    def weight_of(self, gi) -> Fraction:
        return Fraction(0) if gi == KHAT else self.generators[gi].weight

    def parity_of(self, gi) -> int:
        return 0 if gi == KHAT else self.generators[gi].parity

    def _check_homogeneity(self):
        for (si, ti, n), elem in self.opes.items():
            s, t = self.generators[si], self.generators[ti]
            w = s.weight + t.weight - n - 1
            p = (s.parity + t.parity) % 2
            for (j, g) in elem:
                if self.weight_of(g) + j != w or self.parity_of(g) != p:
                    raise ConformalAlgebraError(
                        f"{s.name}_({n}){t.name} has a term of wrong weight or parity",
                        witness=(s.name, t.name, n))

    def pole_order(self, s, t) -> int:
        return self.order.get((self._idx(s), self._idx(t)), 0)

    # structure on K[T]S + Kk ------------------------------------------------
    def T(self, elem: dict, times: int = 1) -> dict:
        if times == 0:
            return dict(elem)
        out = {}
        for (j, g), c in elem.items():
            if g != KHAT:
                out[(j + times, g)] = c
        return out

    def T_divided(self, elem: dict, i: int) -> dict:
        f = divided_power_factor(i)
        return {k: f * c for k, c in self.T(elem, i).items()}

    def _basic(self, m, si, n, mp, ti):
        """(T^m s)_(n) (T^{m'} t) for n >= 0."""
        key = (m, si, n, mp, ti)
        hit = self._prod_cache.get(key)
        if hit is not None:
            return hit
        if mp == 0:
            c = Fraction((-1) ** m * math.factorial(m)) * binom(n, m)
            base = self.opes.get((si, ti, n - m), {}) if n - m >= 0 else {}
            out = {k: c * v for k, v in base.items()} if c else {}
        else:
            out = self.T(self._basic(m, si, n, mp - 1, ti))
            _lin_add(out, self._basic(m + 1, si, n, mp - 1, ti), -1)
        self._prod_cache[key] = out
        return out

    def product(self, u: dict, n: int, v: dict) -> dict:
        """u_(n) v for n >= 0, extended bilinearly from the generator OPEs."""
        if n < 0:
            raise ValueError("conformal algebras carry only the n >= 0 products")
        out: dict = {}
        for (m, si), cu in u.items():
            if si == KHAT:
                continue
            for (mp, ti), cv in v.items():
                if ti == KHAT:
                    continue
                _lin_add(out, self._basic(m, si, n, mp, ti), cu * cv)
        return out

    def gen(self, g) -> dict:
        return {(0, self._idx(g)): Fraction(1)}

    def _parity(self, elem):
        return self.parity_of(next(iter(elem))[1]) if elem else 0

    def axiom_failures(self, check_range: int | None = None) -> list:
        """Generator-level skew-symmetry and Jacobi violations (kind, witness)."""
        fails = []
        gens = range(len(self.generators))
        top = check_range if check_range is not None else 2 * max(self.order.values(), default=0) + 2
        for si, ti in iproduct(gens, gens):
            s, t = self.gen(si), self.gen(ti)
            zeta = supersign(self.parity_of(si), self.parity_of(ti))
            for n in range(top + 1):
                lhs = {k: zeta * c for k, c in self.product(t, n, s).items()}
                rhs: dict = {}
                for j in range(top + 1):
                    sign = -1 if (n + 1 + j) % 2 else 1
                    _lin_add(rhs, self.T_divided(self.product(s, n + j, t), j), sign)
                if lhs != rhs:
                    fails.append(("skew-symmetry", (self.generators[si].name,
                                                    self.generators[ti].name, n)))
        for si, ti, ui in iproduct(gens, gens, gens):
            s, t, u = self.gen(si), self.gen(ti), self.gen(ui)
            zeta = supersign(self.parity_of(si), self.parity_of(ti))
            for m, n in iproduct(range(top + 1), range(top + 1)):
                lhs = self.product(s, m, self.product(t, n, u))
                _lin_add(lhs, self.product(t, n, self.product(s, m, u)), -zeta)
                rhs: dict = {}
                for i in range(m + 1):
                    _lin_add(rhs, self.product(self.product(s, i, t), m + n - i, u), binom(m, i))
                if lhs != rhs:
                    fails.append(("jacobi", (self.generators[si].name, self.generators[ti].name,
                                             self.generators[ui].name, m, n)))
        return fails

    def mode_bracket(self, si: int, p: int, ti: int, q: int):
        """[s_(p), t_(q)] = sum_i binom(p,i) (s_(i)t)_(p+q-i).

        Returns ({(g, r): c}, central) where central multiplies the level.
        (T^j u)_(r) = (-1)^j j! binom(r, j) u_(r-j) and k_(r) = delta_{r,-1} k.
        """
        modes: dict = {}
        central = 0
        for i in range(self.order.get((si, ti), 0)):
            c = binom(p, i)
            if not c:
                continue
            r = p + q - i
            for (j, g), v in self.opes.get((si, ti, i), {}).items():
                if g == KHAT:
                    if r == -1:
                        central += c * v
                    continue
                f = binom(r, j)
                if not f:
                    continue
                f = f * math.factorial(j) * (-1 if j % 2 else 1)
                key = (g, r - j)
                nv = modes.get(key, 0) + c * v * f
                if nv:
                    modes[key] = nv
                else:
                    modes.pop(key, None)
        return modes, central

    def render_elem(self, elem: dict) -> str:
        if not elem:
            return "0"
        parts = []
        for (j, g), c in sorted(elem.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            atom = "k" if g == KHAT else (self.generators[g].name if j == 0
                                         else f"T^{j}({self.generators[g].name})")
            parts.append(f"{c}*{atom}")
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# enveloping vertex algebra on the PBW basis


class VertexAlgebra:
    """Level-k enveloping vertex algebra V^k(R) on the PBW basis.

    A basis key is a tuple of creation modes ``(m, g)`` standing for
    ``s_g(-m)``, ordered with larger m first and, for equal m, by generator
    declaration order; odd modes do not repeat.  The empty tuple is the
    vacuum.  Weights are nonnegative, so the grading is bounded below by 0.
    """

    bounded_below = True
    min_weight = Fraction(0)

    def __init__(self, conformal: ConformalAlgebra, level=1, cutoff=4, name: str | None = None):
        self.R = conformal
        self.level = exact(level)
        self.cutoff = Fraction(cutoff)
        self.name_ = name or conformal.name
        for g in conformal.generators:
            if g.weight <= 0:
                raise ValueError("PBW generators need positive weight for finite graded pieces")
        self.gweights = [int(g.weight) if g.weight.denominator == 1 else g.weight
                         for g in conformal.generators]
        self.gparities = [g.parity for g in conformal.generators]
        self._act: dict = {}
        self._prod: dict = {}
        self._T: dict = {}
        self._weight: dict = {(): 0}
        self._bound: dict = {}
        self._basis_cache: dict = {}
        self._bracket_cache: dict = {}

    # graded space -----------------------------------------------------------
    def weight(self, key) -> Fraction:
        w = self._weight.get(key)
        if w is None:
            w = sum((self.gweights[g] + m - 1 for m, g in key), Fraction(0))
            if w.denominator == 1:
                w = int(w)
            self._weight[key] = w
        return w

    def parity(self, key) -> int:
        return sum(self.gparities[g] for _, g in key) % 2

    def name(self, key) -> str:
        if not key:
            return "1"
        names = self.R.generators
        return "".join(f"{names[g].name}_({-m})" for m, g in key) + "1"

    def bound(self, a, c) -> int:
        ck = (a, c)
        b = self._bound.get(ck)
        if b is None:
            b = mode_bound(self.weight(a), self.weight(c), 0)
            self._bound[ck] = b
        return b

    def basis(self, cutoff=None) -> list:
        cutoff = self.cutoff if cutoff is None else Fraction(cutoff)
        hit = self._basis_cache.get(cutoff)
        if hit is not None:
            return hit
        modes = []
        for g, w in enumerate(self.gweights):
            m = 1
            while w + m - 1 <= cutoff:
                modes.append((m, g))
                m += 1
        modes.sort(key=lambda x: (-x[0], x[1]))
        out = []

        def rec(start, cur, wt):
            out.append(tuple(cur))
            for i in range(start, len(modes)):
                m, g = modes[i]
                nw = wt + self.gweights[g] + m - 1
                if nw > cutoff:
                    continue
                odd = self.gparities[g]
                cur.append((m, g))
                rec(i + 1 if odd else i, cur, nw)
                cur.pop()

        rec(0, [], Fraction(0))
        out.sort(key=self.weight)  # stable: PBW order within a weight
        self._basis_cache[cutoff] = out
        return out

    def character(self, cutoff=None) -> dict:
        """Weight -> dimension, listing empty weights on the lattice too."""
        top = self.cutoff if cutoff is None else Fraction(cutoff)
        step = Fraction(1, math.lcm(1, *(Fraction(w).denominator for w in self.gweights)))
        out: dict = {}
        w = Fraction(0)
        while w <= top:
            out[exact(w)] = 0
            w += step
        for key in self.basis(cutoff):
            w = self.weight(key)
            out[w] = out.get(w, 0) + 1
        return dict(sorted(out.items()))

    # generator modes ----------------------------------------------------------
    def _bracket(self, g, p, h, q):
        key = (g, p, h, q)
        hit = self._bracket_cache.get(key)
        if hit is None:
            hit = self.R.mode_bracket(g, p, h, q)
            self._bracket_cache[key] = hit
        return hit

    def gen_act(self, g: int, p: int, key: tuple) -> Vector:
        """s_g(p) applied to the basis monomial ``key``."""
        ck = (g, p, key)
        hit = self._act.get(ck)
        if hit is not None:
            return hit
        res = self._gen_act(g, p, key)
        self._act[ck] = res
        return res

    def _apply_bracket(self, g, p, h, q, rest) -> Vector:
        modes, central = self._bracket(g, p, h, q)
        out = Vector()
        for (u, r), c in modes.items():
            out.add_scaled(self.gen_act(u, r, rest), c)
        if central:
            out.add_scaled({rest: 1}, central * self.level)
        return out

    def _gen_act(self, g, p, key) -> Vector:
        if p >= 0:
            if self.weight(key) + self.gweights[g] - p - 1 < 0 or not key:
                return Vector()
        elif not key:
            return Vector({((-p, g),): 1})
        (xm, xg), rest = key[0], key[1:]
        if p < 0:
            mine, lead = (p, g), (-xm, xg)
            if mine < lead or (mine == lead and not self.gparities[g]):
                return Vector({((-p, g),) + key: 1})
            if mine == lead:
                # odd mode squared: x x = (1/2)[x, x]
                return self._apply_bracket(g, p, xg, -xm, rest).scale(Fraction(1, 2))
        out = self._apply_bracket(g, p, xg, -xm, rest)
        zeta = supersign(self.gparities[g], self.gparities[xg])
        inner = self.gen_act(g, p, rest)
        for k, c in inner.items():
            out.add_scaled(self.gen_act(xg, -xm, k), zeta * c)
        return out

    def apply_gen(self, g: int, p: int, vec: dict) -> Vector:
        out = Vector()
        for k, c in vec.items():
            out.add_scaled(self.gen_act(g, p, k), c)
        return out

    # states -----------------------------------------------------------------
    def vacuum(self) -> Vector:
        return Vector({(): Fraction(1)})

    def gen_state(self, name) -> Vector:
        return Vector({((1, self.R._idx(name)),): Fraction(1)})

    def state(self, key) -> Vector:
        return Vector({key: Fraction(1)})

    def state_product(self, a: tuple, n: int, c: tuple) -> Vector:
        """a_(n) c for basis monomials a, c."""
        if n > self.bound(a, c):
            return Vector()
        ck = (a, n, c)
        hit = self._prod.get(ck)
        if hit is not None:
            return hit
        res = self._state_product(a, n, c)
        self._prod[ck] = res
        return res

    def _state_product(self, a, n, c) -> Vector:
        if not a:
            return Vector({c: 1}) if n == -1 else Vector()
        (m, s), rest = a[0], a[1:]
        if not rest:
            # s_(-m) 1 = T^{(m-1)} s, whose field is the divided derivative
            k = m - 1
            coef = binom(n, k) * (-1 if k % 2 else 1)
            return self.gen_act(s, n - k, c).scale(coef) if coef else Vector()
        # associativity formula with r = -m
        out = Vector()
        rest_vec = {rest: 1}
        i = 0
        while n + i <= self.bound(rest, c):
            co = binom(-m, i)
            if i % 2:
                co = -co
            inner = self.state_product(rest, n + i, c)
            if inner:
                out.add_scaled(self.apply_gen(s, -m - i, inner), co)
            i += 1
        zeta = supersign(self.gparities[s], self.parity(rest))
        sign_m = -1 if m % 2 else 1
        top = math.floor(self.gweights[s] + self.weight(c) - 1)
        for i in range(0, top + 1):
            co = binom(-m, i)
            if i % 2:
                co = -co
            inner = self.gen_act(s, i, c)
            if inner:
                out.add_scaled(self.product(rest_vec, -m + n - i, inner), -zeta * sign_m * co)
        return out

    def product(self, a: dict, n: int, c: dict) -> Vector:
        out = Vector()
        for ka, ca in a.items():
            for kc, cc in c.items():
                out.add_scaled(self.state_product(ka, n, kc), ca * cc)
        return out

    def T(self, vec: dict) -> Vector:
        out = Vector()
        for k, c in vec.items():
            out.add_scaled(self._T_key(k), c)
        return out

    def _T_key(self, key) -> Vector:
        hit = self._T.get(key)
        if hit is not None:
            return hit
        if not key:
            res = Vector()
        else:
            (m, g), rest = key[0], key[1:]
            # [T, s_(-m)] = m s_(-m-1)
            res = self.gen_act(g, -m - 1, rest).scale(m)
            res.add_scaled(self.apply_gen(g, -m, self._T_key(rest)), 1)
        self._T[key] = res
        return res

    def Y(self, vec: dict, name: str | None = None) -> Field:
        vec = Vector(vec)
        if not vec:
            return Field(self, 0, 0, lambda n, key: Vector(), name=name or "0")
        w = {self.weight(k) for k in vec}
        p = {self.parity(k) for k in vec}
        if len(w) != 1 or len(p) != 1:
            raise ValueError("Y needs a homogeneous state")
        return Field(self, w.pop(), p.pop(),
                     lambda n, key: self.product(vec, n, {key: 1}),
                     name=name or self.render(vec))

    def generator_field(self, name) -> Field:
        g = self.R._idx(name)
        return Field(self, self.gweights[g], self.gparities[g],
                     lambda n, key: self.gen_act(g, n, key), name=self.R.generators[g].name)

    def render(self, vec: dict) -> str:
        return Vector(vec).render(self.name)

    def __repr__(self):
        return f"VertexAlgebra({self.name_}, level={self.level}, cutoff={self.cutoff})"


def enveloping_vertex_algebra(R: ConformalAlgebra, k=1, cutoff=4) -> VertexAlgebra:
    return VertexAlgebra(R, k, cutoff)


def conformal_from_linear_opes(generators, opes, name="conformal", validate=True) -> ConformalAlgebra:
    return ConformalAlgebra(generators, opes, name=name, validate=validate)


# ---------------------------------------------------------------------------
# commutative vertex algebra K[x], T = d/dx


class PolynomialVertexAlgebra:
    """Commutative vertex algebra K[x] with T = d/dx and x^k of weight -k.

    a_(n) b = T^{(-1-n)}(a) b and every n >= 0 product vanishes.  Basis keys
    are exponents k.  The grading is unbounded below; the cutoff window is
    degrees <= ``degree``, and checks needing lower weights are skipped.
    """

    bounded_below = False

    def __init__(self, degree: int = 4):
        self.degree = int(degree)
        self.min_weight = Fraction(-self.degree)
        self.cutoff = Fraction(0)
        self.name_ = f"poly_comm({degree})"

    def weight(self, key) -> Fraction:
        return Fraction(-key)

    def parity(self, key) -> int:
        return 0

    def name(self, key) -> str:
        return "1" if key == 0 else ("x" if key == 1 else f"x^{key}")

    def basis(self, cutoff=None) -> list:
        return list(range(self.degree + 1))

    def character(self, cutoff=None) -> dict:
        return dict(sorted((self.weight(k), 1) for k in self.basis()))

    def bound(self, a, c) -> int:
        return -1

    def field_bound(self, h, key) -> int:
        return -1

    def state_product(self, a: int, n: int, c: int) -> Vector:
        if n >= 0:
            return Vector()
        j = -1 - n
        co = binom(a, j)
        return Vector({a - j + c: co}) if co else Vector()

    def product(self, a: dict, n: int, c: dict) -> Vector:
        out = Vector()
        for ka, ca in a.items():
            for kc, cc in c.items():
                out.add_scaled(self.state_product(ka, n, kc), ca * cc)
        return out

    def T(self, vec: dict) -> Vector:
        out = Vector()
        for k, c in vec.items():
            if k:
                out.add_scaled({k - 1: k}, c)
        return out

    def vacuum(self) -> Vector:
        return Vector({0: Fraction(1)})

    def state(self, key) -> Vector:
        return Vector({key: Fraction(1)})

    def Y(self, vec: dict, name=None) -> Field:
        vec = Vector(vec)
        w = {self.weight(k) for k in vec} or {Fraction(0)}
        return Field(self, w.pop(), 0, lambda n, key: self.product(vec, n, {key: 1}),
                     name=name or self.render(vec))

    def render(self, vec: dict) -> str:
        return Vector(vec).render(self.name)

    def __repr__(self):
        return f"PolynomialVertexAlgebra(degree={self.degree})"


def commutative_vertex_algebra(degree: int = 4) -> PolynomialVertexAlgebra:
    return PolynomialVertexAlgebra(degree)


# ---------------------------------------------------------------------------
# tensor products


class TensorVertexAlgebra:
    """V (x) V' with (a(x)a')_(n)(b(x)b') = sum_m zeta(a',b) a_(m)b (x) a'_(n-1-m)b'."""

    def __init__(self, left, right, cutoff=None):
        self.left, self.right = left, right
        self.bounded_below = left.bounded_below and right.bounded_below
        self.min_weight = left.min_weight + right.min_weight
        self.cutoff = Fraction(cutoff) if cutoff is not None else left.cutoff + right.cutoff
        self.name_ = f"{left.name_}(x){right.name_}"
        self._prod: dict = {}

    def weight(self, key):
        return self.left.weight(key[0]) + self.right.weight(key[1])

    def parity(self, key):
        return (self.left.parity(key[0]) + self.right.parity(key[1])) % 2

    def name(self, key):
        return f"{self.left.name(key[0])}(x){self.right.name(key[1])}"

    def bound(self, a, c) -> int:
        return self.left.bound(a[0], c[0]) + self.right.bound(a[1], c[1]) + 1

    def basis(self, cutoff=None) -> list:
        cutoff = self.cutoff if cutoff is None else Fraction(cutoff)
        out = []
        for k1 in self.left.basis(cutoff - self.right.min_weight):
            for k2 in self.right.basis(cutoff - self.left.weight(k1)):
                if self.weight((k1, k2)) <= cutoff:
                    out.append((k1, k2))
        out.sort(key=self.weight)
        return out

    def character(self, cutoff=None) -> dict:
        out: dict = {}
        for key in self.basis(cutoff):
            w = self.weight(key)
            out[w] = out.get(w, 0) + 1
        return dict(sorted(out.items()))

    def state_product(self, a, n, c) -> Vector:
        ck = (a, n, c)
        hit = self._prod.get(ck)
        if hit is not None:
            return hit
        (a1, a2), (c1, c2) = a, c
        zeta = supersign(self.right.parity(a2), self.left.parity(c1))
        out = Vector()
        m_hi = self.left.bound(a1, c1)
        m_lo = n - 1 - self.right.bound(a2, c2)
        for m in range(m_lo, m_hi + 1):
            x = self.left.state_product(a1, m, c1)
            if not x:
                continue
            y = self.right.state_product(a2, n - 1 - m, c2)
            for k1, v1 in x.items():
                for k2, v2 in y.items():
                    out.add_scaled({(k1, k2): v1 * v2}, zeta)
        self._prod[ck] = out
        return out

    def product(self, a: dict, n: int, c: dict) -> Vector:
        out = Vector()
        for ka, ca in a.items():
            for kc, cc in c.items():
                out.add_scaled(self.state_product(ka, n, kc), ca * cc)
        return out

    def T(self, vec: dict) -> Vector:
        out = Vector()
        for (k1, k2), c in vec.items():
            for j1, v in self.left.T({k1: 1}).items():
                out.add_scaled({(j1, k2): v}, c)
            for j2, v in self.right.T({k2: 1}).items():
                out.add_scaled({(k1, j2): v}, c)
        return out

    def vacuum(self) -> Vector:
        return Vector({(next(iter(self.left.vacuum())), next(iter(self.right.vacuum()))): Fraction(1)})

    def state(self, key) -> Vector:
        return Vector({key: Fraction(1)})

    def Y(self, vec: dict, name=None) -> Field:
        vec = Vector(vec)
        w = {self.weight(k) for k in vec}
        p = {self.parity(k) for k in vec}
        return Field(self, w.pop(), p.pop(), lambda n, key: self.product(vec, n, {key: 1}),
                     name=name or self.render(vec))

    def render(self, vec: dict) -> str:
        return Vector(vec).render(self.name)


def tensor_product(V, Vp, cutoff=None) -> TensorVertexAlgebra:
    return TensorVertexAlgebra(V, Vp, cutoff)


# ---------------------------------------------------------------------------
# catalog


def _elem(**terms):
    return terms


def heisenberg_conformal(level_name="a") -> ConformalAlgebra:
    return ConformalAlgebra([Generator("a", 0, 1)], {("a", "a", 1): {(0, "k"): 1}},
                            name="heisenberg")


def virasoro_conformal(c=Fraction(1, 2)) -> ConformalAlgebra:
    c = Fraction(c)
    return ConformalAlgebra([Generator("L", 0, 2)],
                            {("L", "L", 0): {(1, "L"): 1}, ("L", "L", 1): {(0, "L"): 2},
                             ("L", "L", 3): {(0, "k"): c / 2}}, name=f"virasoro(c={c})")


def clifford1_conformal() -> ConformalAlgebra:
    return ConformalAlgebra([Generator("psi", 1, Fraction(1, 2))],
                            {("psi", "psi", 0): {(0, "k"): 1}}, name="clifford1")


SL2_BRACKET = {("h", "e"): {"e": 2}, ("e", "h"): {"e": -2}, ("h", "f"): {"f": -2},
               ("f", "h"): {"f": 2}, ("e", "f"): {"h": 1}, ("f", "e"): {"h": -1}}
SL2_PAIRING = {("e", "f"): 1, ("f", "e"): 1, ("h", "h"): 2}


def affine_sl2_conformal() -> ConformalAlgebra:
    opes = {}
    for (x, y), val in SL2_BRACKET.items():
        opes[(x, y, 0)] = {(0, g): c for g, c in val.items()}
    for (x, y), c in SL2_PAIRING.items():
        opes[(x, y, 1)] = {(0, "k"): c}
    return ConformalAlgebra([Generator("e", 0, 1), Generator("h", 0, 1), Generator("f", 0, 1)],
                            opes, name="affine_sl2")


def heisenberg(level=1, cutoff=4) -> VertexAlgebra:
    return VertexAlgebra(heisenberg_conformal(), level, cutoff, name=f"heisenberg(k={Fraction(level)})")


def virasoro(c=Fraction(1, 2), cutoff=4) -> VertexAlgebra:
    return VertexAlgebra(virasoro_conformal(c), 1, cutoff, name=f"virasoro(c={Fraction(c)})")


def clifford1(level=1, cutoff=4) -> VertexAlgebra:
    return VertexAlgebra(clifford1_conformal(), level, cutoff, name=f"clifford1(k={Fraction(level)})")


def affine_sl2(level=1, cutoff=4) -> VertexAlgebra:
    return VertexAlgebra(affine_sl2_conformal(), level, cutoff, name=f"affine_sl2(k={Fraction(level)})")


def poly_comm(degree=4, cutoff=None) -> PolynomialVertexAlgebra:
    return PolynomialVertexAlgebra(degree)


HOLOMORPHIC_CATALOG = {
    "heisenberg": heisenberg,
    "virasoro": virasoro,
    "clifford1": clifford1,
    "affine_sl2": affine_sl2,
    "poly_comm": poly_comm,
}


# ---------------------------------------------------------------------------
# conformal vectors


@dataclass
class ConformalVerdict:
    is_virasoro: bool
    central_charge: Fraction | None
    is_conformal: bool
    reason: str = ""

    def as_tuple(self):
        return (self.is_virasoro, self.central_charge, self.is_conformal)


def conformal_vector_check(V, omega: dict, cutoff=None) -> ConformalVerdict:
    """Is omega a Virasoro state, and does L_(0) = T, L_(1) = weight hold on the basis?"""
    cutoff = V.cutoff if cutoff is None else Fraction(cutoff)
    omega = Vector(omega)
    if not omega or any(V.parity(k) for k in omega) or {V.weight(k) for k in omega} != {2}:
        return ConformalVerdict(False, None, False, "omega must be even of weight 2")
    prods = {n: V.product(omega, n, omega) for n in range(0, 6)}
    if any(prods[n] for n in (4, 5)):
        return ConformalVerdict(False, None, False, "locality order exceeds 4")
    if prods[0] != V.T(omega):
        return ConformalVerdict(False, None, False, "L_(0)L differs from T L")
    if prods[1] != omega.scale(2):
        return ConformalVerdict(False, None, False, "L_(1)L differs from 2L")
    if prods[2]:
        return ConformalVerdict(False, None, False, "L_(2)L is nonzero")
    vac = V.vacuum()
    third = prods[3]
    if third and set(third) != set(vac):
        return ConformalVerdict(False, None, False, "L_(3)L is not a vacuum multiple")
    c = 2 * third.get(next(iter(vac)), Fraction(0))
    for key in V.basis(cutoff):
        v = {key: 1}
        if V.product(omega, 0, v) != V.T(v):
            return ConformalVerdict(True, c, False, f"L_(0) != T on {V.name(key)}")
        if V.product(omega, 1, v) != Vector(v).scale(V.weight(key)):
            return ConformalVerdict(True, c, False, f"L_(1) != weight on {V.name(key)}")
    return ConformalVerdict(True, c, True)


# ---------------------------------------------------------------------------
# axiom sweeps


@dataclass
class SweepConfig:
    cutoff: Fraction = Fraction(4)
    index_box: tuple = (-3, 3)
    kinds: tuple = IDENTITY_KINDS + ("skew_symmetry", "vacuum", "translation", "locality_order")
    sample: int | None = None
    seed: int = 0


def _sample_triples(basis, cfg: SweepConfig):
    triples = list(iproduct(basis, basis, basis))
    if cfg.sample is not None and cfg.sample < len(triples):
        import random

        rng = random.Random(cfg.seed)
        triples = rng.sample(triples, cfg.sample)
    return triples


def check_vacuum_axioms(V, cutoff, box, report: Report) -> Report:
    vac_key = next(iter(V.vacuum()))
    ident = "vacuum"
    for key in V.basis(cutoff):
        v = {key: 1}
        for n in range(box[0], box[1] + 1):
            left = V.product(V.vacuum(), n, v)
            want = Vector(v) if n == -1 else Vector()
            _record(report, ident, {"state": V.name(key), "n": n, "side": "left"}, left, want, V)
            if n >= -1:
                right = V.product(v, n, V.vacuum())
                want = Vector(v) if n == -1 else Vector()
                _record(report, ident, {"state": V.name(key), "n": n, "side": "right"},
                        right, want, V)
            else:
                k = -1 - n
                if V.weight(key) + k <= cutoff:
                    right = V.product(v, n, V.vacuum())
                    _record(report, ident, {"state": V.name(key), "n": n, "side": "creative"},
                            right, translation_power(V, v, k), V)
    _record(report, "translation", {"state": "1"}, V.T(V.vacuum()), Vector(), V)
    del vac_key
    return report


def check_translation_axioms(V, cutoff, box, report: Report, pairs=None) -> Report:
    basis = V.basis(cutoff)
    pairs = pairs if pairs is not None else list(iproduct(basis, basis))
    for a, b in pairs:
        A, B = {a: 1}, {b: 1}
        for n in range(box[0], box[1] + 1):
            if V.weight(a) + V.weight(b) - n > cutoff:
                report.tally("translation", "skip")
                continue
            idx = {"a": V.name(a), "b": V.name(b), "n": n}
            TA = V.T(A)
            lhs = V.product(TA, n, B)
            _record(report, "translation", dict(idx, form="(Ta)_(n)b"), lhs,
                    V.product(A, n - 1, B).scale(-n), V)
            lhs = V.T(V.product(A, n, B))
            rhs = lhs_rhs = V.product(TA, n, B) + V.product(A, n, V.T(B))
            _record(report, "translation", dict(idx, form="derivation"), lhs, rhs, V)
            del lhs_rhs
    return report


def _record(report, ident, idx, lhs, rhs, V):
    if lhs == rhs:
        report.tally(ident, PASS)
    else:
        diff = Vector(lhs) - Vector(rhs)
        report.add(CheckRecord(ident, idx, FAIL, witness=V.name(next(iter(diff))),
                               lhs=V.render(lhs), rhs=V.render(rhs)))


def check_locality_orders(V, cutoff, report: Report, pairs=None) -> Report:
    """Pole orders of state pairs against the field-level locality order."""
    from .fieldcalc import locality_order

    basis = V.basis(cutoff)
    pairs = pairs if pairs is not None else list(iproduct(basis, basis))
    for a, b in pairs:
        if V.weight(a) + V.weight(b) > cutoff:
            report.tally("locality_order", "skip")
            continue
        N = pole_order(V, a, b)
        res = locality_order(V.Y({a: 1}), V.Y({b: 1}), cutoff)
        idx = {"a": V.name(a), "b": V.name(b)}
        if res.order == N:
            report.tally("locality_order", PASS)
        else:
            report.add(CheckRecord("locality_order", idx, FAIL, witness=f"{res.order} != {N}"))
    return report


def verify_axioms(V, cfg: SweepConfig | None = None, kinds=None) -> Report:
    """Sweep the vertex-algebra axioms over basis states up to the cutoff."""
    cfg = cfg or SweepConfig(cutoff=V.cutoff)
    kinds = tuple(kinds or cfg.kinds)
    cutoff = Fraction(cfg.cutoff)
    lo, hi = cfg.index_box
    box = range(lo, hi + 1)
    rep = Report(f"vertex algebra axioms: {getattr(V, 'name_', V)}", cutoff=cutoff,
                 index_box=[lo, hi], meta={"sample": cfg.sample, "seed": cfg.seed})
    basis = V.basis(cutoff)
    if "vacuum" in kinds:
        check_vacuum_axioms(V, cutoff, (lo, hi), rep)
    if "translation" in kinds:
        check_translation_axioms(V, cutoff, (lo, hi), rep)
    if "locality_order" in kinds:
        check_locality_orders(V, min(cutoff, Fraction(2)), rep)
    if "skew_symmetry" in kinds:
        for a, b in iproduct(basis, basis):
            check_skew_symmetry(V, a, b, box, cutoff, rep)
    poles: dict = {}
    triples = _sample_triples(basis, cfg)
    for kind in kinds:
        if kind not in IDENTITY_KINDS:
            continue
        for a, b, c in triples:
            check_identity(kind, V, a, b, c, box, box, box, cutoff, rep, poles)
    return rep


def graded_character(V, cutoff=None) -> dict:
    return V.character(cutoff)


def state_label(V, vec: dict) -> str:
    """Render a state, writing multiples of the vacuum as multiples of k.

    In V^k the vacuum coefficient of a product is the level times the
    coefficient of the central element, so c * 1 renders as (c/level) k.
    """
    vec = Vector(vec)
    vac = next(iter(V.vacuum()))
    level = getattr(V, "level", 0)
    if len(vec) == 1 and vac in vec and level:
        c = exact(Fraction(vec[vac]) / Fraction(level))
        return "k" if c == 1 else f"({render_scalar(c)})k"
    return V.render(vec)
