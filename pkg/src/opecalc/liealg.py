"""Local Lie algebras given by mode brackets: affinizations and Virasoro.

Elements are finite combinations of mode symbols:

* ``("a", x, n)``   the mode x_n = x (x) t^n of a Lie algebra element x,
* ``("abar", x, m)`` the odd partner of x with half-integral m,
* ``("L", n)``       Virasoro modes,
* ``("k",)``         the central element (``("c",)`` for Virasoro).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from typing import Callable

from .numcore import exact, supersign
from .report import FAIL, PASS, CheckRecord, Report

HALF = Fraction(1, 2)


class Element(dict):
    """Finite linear combination of mode symbols."""

    __slots__ = ()

    def add_scaled(self, other: dict, c=1) -> "Element":
        for k, v in other.items():
            nv = self.get(k, 0) + c * v
            if nv:
                self[k] = nv
            else:
                self.pop(k, None)
        return self

    def __add__(self, other):
        return Element(self).add_scaled(other)

    def __sub__(self, other):
        return Element(self).add_scaled(other, -1)

    def __neg__(self):
        return Element({k: -v for k, v in self.items()})

    def scale(self, c) -> "Element":
        return Element({k: c * v for k, v in self.items()}) if c else Element()

    def __rmul__(self, c):
        return self.scale(c)

    def render(self) -> str:
        if not self:
            return "0"
        parts = []
        for k, v in sorted(self.items(), key=lambda kv: repr(kv[0])):
            parts.append(symbol_name(k) if v == 1 else f"{v}*{symbol_name(k)}")
        return " + ".join(parts)


def symbol_name(sym) -> str:
    kind = sym[0]
    if kind == "a":
        return f"{sym[1]}_{sym[2]}"
    if kind == "abar":
        return f"{sym[1]}bar_{sym[2]}"
    if kind == "L":
        return f"L_{sym[1]}"
    return {"k": "k", "c": "c"}[kind]


def mode(x: str, n) -> Element:
    return Element({("a", x, exact(n)): 1})


def odd_mode(x: str, m) -> Element:
    m = Fraction(m)
    if (m - HALF).denominator != 1:
        raise ValueError("odd modes carry half-odd-integer indices")
    return Element({("abar", x, m): 1})


def vir(n) -> Element:
    return Element({("L", exact(n)): 1})


def central(name="k") -> Element:
    return Element({(name,): 1})


@dataclass
class LiePresentation:
    """Basis, parities, structure constants and a pairing of a Lie superalgebra.

    ``bracket[(x, y)]`` maps to {z: coeff}; missing pairs bracket to zero.
    ``pairing[(x, y)]`` is the invariant form.
    """

    basis: tuple
    parity: dict
    bracket: dict = field(default_factory=dict)
    pairing: dict = field(default_factory=dict)

    def br(self, x, y) -> dict:
        return self.bracket.get((x, y), {})

    def form(self, x, y):
        return self.pairing.get((x, y), 0)

    def validate(self) -> list:
        """Violations of super skew-symmetry, Jacobi, symmetry, evenness and invariance."""
        errs = []
        B = self.basis
        p = self.parity
        for x, y in iproduct(B, B):
            s = supersign(p[x], p[y])
            lhs = dict(self.br(x, y))
            for z, c in self.br(y, x).items():
                lhs[z] = lhs.get(z, 0) + s * c
            if any(lhs.values()):
                errs.append(("skew", x, y))
            if self.form(x, y) != self.form(y, x):
                errs.append(("symmetric", x, y))
            if self.form(x, y) and (p[x] + p[y]) % 2:
                errs.append(("even", x, y))
        for x, y, z in iproduct(B, B, B):
            # [x,[y,z]] = [[x,y],z] + (-1)^{xy} [y,[x,z]]
            def br_el(u, elem):
                out = {}
                for w, c in elem.items():
                    for v, d in self.br(u, w).items():
                        out[v] = out.get(v, 0) + c * d
                return out

            def br_el_left(elem, u):
                out = {}
                for w, c in elem.items():
                    for v, d in self.br(w, u).items():
                        out[v] = out.get(v, 0) + c * d
                return out

            lhs = br_el(x, self.br(y, z))
            rhs = br_el_left(self.br(x, y), z)
            for v, c in br_el(y, self.br(x, z)).items():
                rhs[v] = rhs.get(v, 0) + supersign(p[x], p[y]) * c
            keys = set(lhs) | set(rhs)
            if any(lhs.get(k, 0) != rhs.get(k, 0) for k in keys):
                errs.append(("jacobi", x, y, z))
            # invariance ([x,y],z) = (x,[y,z])
            a = sum(c * self.form(w, z) for w, c in self.br(x, y).items())
            b = sum(c * self.form(x, w) for w, c in self.br(y, z).items())
            if a != b:
                errs.append(("invariance", x, y, z))
        return errs


class LocalLieAlgebra:
    """Bracket evaluator on Elements given a bracket on pairs of symbols."""

    def __init__(self, name: str, symbol_bracket: Callable, parity: Callable,
                 translation: Callable | None = None, central_symbols=("k",)):
        self.name = name
        self._br = symbol_bracket
        self._parity = parity
        self._translation = translation
        self.central_symbols = central_symbols

    def parity(self, sym) -> int:
        return self._parity(sym)

    def bracket(self, x: dict, y: dict) -> Element:
        out = Element()
        for s, c in x.items():
            for t, d in y.items():
                out.add_scaled(self._br(s, t), c * d)
        return out

    def T(self, x: dict) -> Element:
        """Translation derivation T(x_n) = -n x_{n-1} (central symbols are killed)."""
        if self._translation is None:
            raise NotImplementedError
        out = Element()
        for s, c in x.items():
            out.add_scaled(self._translation(s), c)
        return out

    def element_parity(self, x: dict) -> int:
        ps = {self.parity(s) for s in x}
        if len(ps) > 1:
            raise ValueError("element of mixed parity")
        return ps.pop() if ps else 0


def _translation(sym) -> Element:
    kind = sym[0]
    if kind in ("k", "c"):
        return Element()
    if kind == "L":
        # L_n = L_(n+1) as a field mode, so T L_n = -(n+1) L_{n-1}
        n = sym[1]
        return Element({("L", n - 1): -(n + 1)}) if n + 1 else Element()
    if kind == "a":
        n = sym[2]
        return Element({("a", sym[1], n - 1): -n}) if n else Element()
    # abar_m is the field mode (m - 1/2): T abar_m = -(m - 1/2) abar_{m-1}
    m = sym[2]
    return Element({("abar", sym[1], m - 1): -(m - HALF)}) if m != HALF else Element()


def superaffinize(g: LiePresentation, include_even=True, include_odd=True,
                  name="superaffinization") -> LocalLieAlgebra:
    """[a_n, b_m] = [a,b]_{n+m} + n (a,b) delta k,  [a_n, bbar_m] = [a,b]bar_{n+m},
    [abar_n, bbar_m] = (b,a) delta k; k central."""
    errs = g.validate()
    if errs:
        raise ValueError(f"invalid Lie presentation: {errs[0]}")

    def parity(sym):
        if sym[0] == "k":
            return 0
        if sym[0] == "a":
            return g.parity[sym[1]]
        return (g.parity[sym[1]] + 1) % 2

    def br(s, t):
        if s[0] == "k" or t[0] == "k":
            return Element()
        if s[0] == "a" and t[0] == "a":
            if not include_even:
                raise ValueError("even modes are not part of this algebra")
            n, m = s[2], t[2]
            out = Element({("a", z, n + m): c for z, c in g.br(s[1], t[1]).items()})
            if n + m == 0:
                f = n * g.form(s[1], t[1])
                if f:
                    out.add_scaled({("k",): f})
            return out
        if s[0] == "a" and t[0] == "abar":
            return Element({("abar", z, s[2] + t[2]): c for z, c in g.br(s[1], t[1]).items()})
        if s[0] == "abar" and t[0] == "a":
            # super skew-symmetry: [xbar, y] = -(-1)^{|xbar||y|} [y, xbar]
            sgn = -supersign(parity(s), parity(t))
            return br(t, s).scale(sgn)
        if s[0] == "abar" and t[0] == "abar":
            if s[2] + t[2] == 0:
                f = g.form(t[1], s[1])
                return Element({("k",): f}) if f else Element()
            return Element()
        raise ValueError(f"unknown symbols {s}, {t}")

    return LocalLieAlgebra(name, br, parity, _translation)


def affinize(g: LiePresentation) -> LocalLieAlgebra:
    return superaffinize(g, include_odd=False, name="affinization")


def clifford_affinize(basis, pairing: dict) -> LocalLieAlgebra:
    """Clifford affinization of an even space with a symmetric pairing."""
    pres = LiePresentation(tuple(basis), {x: 0 for x in basis}, {}, dict(pairing))
    return superaffinize(pres, include_even=False, name="clifford affinization")


def virasoro_algebra() -> LocalLieAlgebra:
    """[L_n, L_m] = (n-m) L_{n+m} + delta_{n+m,0} (n^3-n)/12 c."""

    def br(s, t):
        if s[0] == "c" or t[0] == "c":
            return Element()
        n, m = s[1], t[1]
        out = Element({("L", n + m): n - m}) if n != m else Element()
        if n + m == 0:
            f = Fraction(n ** 3 - n, 12)
            if f:
                out.add_scaled({("c",): exact(f)})
        return out

    return LocalLieAlgebra("virasoro", br, lambda sym: 0, _translation, central_symbols=("c",))


def witt_cocycle(n: int, m: int) -> Fraction:
    """Coefficient of c in [L_n, L_m]."""
    return Fraction(n ** 3 - n, 12) if n + m == 0 else Fraction(0)


def check_cocycle(bound: int = 10) -> Report:
    """eps([a,b],c) - eps([a,c],b) + eps([b,c],a) = 0 on Witt basis triples l_n, l_m, l_k."""
    rep = Report("virasoro cocycle", index_box=[-bound, bound])

    def eps_br(x, y, z):
        # eps([l_x, l_y], l_z) with [l_x, l_y] = (x - y) l_{x+y}
        return (x - y) * witt_cocycle(x + y, z)

    for n, m, k in iproduct(range(-bound, bound + 1), repeat=3):
        val = eps_br(n, m, k) - eps_br(n, k, m) + eps_br(m, k, n)
        if val == 0:
            rep.tally("cocycle", PASS)
        else:
            rep.add(CheckRecord("cocycle", {"n": n, "m": m, "k": k}, FAIL, witness=str(val)))
    return rep


def check_lie_jacobi(alg: LocalLieAlgebra, triples) -> Report:
    """[x,[y,z]] - [[x,y],z] - (-1)^{xy} [y,[x,z]] = 0 on each triple."""
    rep = Report(f"{alg.name} Jacobi")
    for x, y, z in triples:
        px, py = alg.element_parity(x), alg.element_parity(y)
        val = alg.bracket(x, alg.bracket(y, z))
        val.add_scaled(alg.bracket(alg.bracket(x, y), z), -1)
        val.add_scaled(alg.bracket(y, alg.bracket(x, z)), -supersign(px, py))
        idx = {"x": Element(x).render(), "y": Element(y).render(), "z": Element(z).render()}
        if not val:
            rep.tally("lie_jacobi", PASS)
        else:
            rep.add(CheckRecord("lie_jacobi", idx, FAIL, witness=val.render()))
    return rep


def check_translation_derivation(alg: LocalLieAlgebra, pairs) -> Report:
    """T[x,y] = [Tx,y] + [x,Ty] on each pair."""
    rep = Report(f"{alg.name} translation")
    for x, y in pairs:
        lhs = alg.T(alg.bracket(x, y))
        rhs = alg.bracket(alg.T(x), y) + alg.bracket(x, alg.T(y))
        if lhs == rhs:
            rep.tally("translation", PASS)
        else:
            rep.add(CheckRecord("translation", {"x": Element(x).render(), "y": Element(y).render()},
                                FAIL, lhs=lhs.render(), rhs=rhs.render()))
    return rep


def check_central(alg: LocalLieAlgebra, elements) -> Report:
    rep = Report(f"{alg.name} centrality")
    for sym in alg.central_symbols:
        k = central(sym)
        for x in elements:
            if alg.bracket(k, x) or alg.bracket(x, k):
                rep.add(CheckRecord("central", {"x": Element(x).render()}, FAIL))
            else:
                rep.tally("central", PASS)
    return rep


# catalog presentations


def abelian(names=("a",), pairing=None) -> LiePresentation:
    names = tuple(names)
    pairing = pairing if pairing is not None else {(x, x): 1 for x in names}
    return LiePresentation(names, {x: 0 for x in names}, {}, pairing)


def sl2() -> LiePresentation:
    from .vertexalg import SL2_BRACKET, SL2_PAIRING

    return LiePresentation(("e", "h", "f"), {"e": 0, "h": 0, "f": 0},
                           {k: dict(v) for k, v in SL2_BRACKET.items()}, dict(SL2_PAIRING))


def heisenberg_lie(level_pairing=1) -> LocalLieAlgebra:
    return affinize(abelian(("a",), {("a", "a"): level_pairing}))


def clifford1_lie() -> LocalLieAlgebra:
    return clifford_affinize(("a",), {("a", "a"): 1})


def affine_sl2_lie() -> LocalLieAlgebra:
    return affinize(sl2())


LIE_CATALOG = {
    "heisenberg": heisenberg_lie,
    "clifford1": clifford1_lie,
    "virasoro": virasoro_algebra,
    "affine_sl2": affine_sl2_lie,
}
