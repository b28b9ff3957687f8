"""Sparse formal distributions in a few named variables.

A :class:`Distribution` stores finitely many terms ``coeff * z^p * w^q ...``
keyed by the tuple of (rational) powers, together with a :class:`Window`
recording the region of exponent space on which the stored data is the
complete truth.  Objects with infinite support (the delta distribution,
expansions of negative powers) only ever exist windowed; every operation
propagates windows so that comparisons are made on the region where both
sides are known.

Powers are stored, not modes: the mode ``a_n`` of ``a(z) = sum a_n z^{-n-1}``
is read with :meth:`Distribution.mode`.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product as iproduct
from typing import Callable, Iterable, Mapping

from .numcore import NonStatisticalExponent, binom, render_scalar, signed_power

Bound = tuple  # (lo, hi) with None meaning unbounded


class WindowError(ValueError):
    """The requested data is not determined by the windows involved."""


class SummabilityError(WindowError):
    pass


def _F(x):
    return None if x is None else Fraction(x)


class Window:
    """Per-variable closed power intervals; a missing variable is unbounded."""

    __slots__ = ("bounds",)

    def __init__(self, bounds: Mapping[str, Bound] | None = None):
        clean = {}
        for var, (lo, hi) in (bounds or {}).items():
            if lo is None and hi is None:
                continue
            clean[var] = (_F(lo), _F(hi))
        self.bounds = clean

    @classmethod
    def full(cls) -> "Window":
        return cls()

    def get(self, var) -> Bound:
        return self.bounds.get(var, (None, None))

    @property
    def is_full(self) -> bool:
        return not self.bounds

    def contains(self, variables, powers) -> bool:
        for var, p in zip(variables, powers):
            lo, hi = self.get(var)
            if lo is not None and p < lo:
                return False
            if hi is not None and p > hi:
                return False
        return True

    def intersect(self, other: "Window") -> "Window":
        out = dict(self.bounds)
        for var, (lo, hi) in other.bounds.items():
            lo0, hi0 = out.get(var, (None, None))
            lo1 = lo if lo0 is None else (lo0 if lo is None else max(lo0, lo))
            hi1 = hi if hi0 is None else (hi0 if hi is None else min(hi0, hi))
            out[var] = (lo1, hi1)
        return Window(out)

    def shifted(self, var, h) -> "Window":
        lo, hi = self.get(var)
        out = dict(self.bounds)
        if lo is not None or hi is not None:
            out[var] = (None if lo is None else lo + h, None if hi is None else hi + h)
        return Window(out)

    def without(self, var) -> "Window":
        return Window({v: b for v, b in self.bounds.items() if v != var})

    def renamed(self, mapping) -> "Window":
        return Window({mapping.get(v, v): b for v, b in self.bounds.items()})

    def is_empty(self) -> bool:
        return any(lo is not None and hi is not None and lo > hi for lo, hi in self.bounds.values())

    def __eq__(self, other):
        return isinstance(other, Window) and self.bounds == other.bounds

    def __repr__(self):
        return f"Window({self.bounds})"


def _is_zero(c) -> bool:
    return not c


class Distribution:
    """Finite sparse map from power tuples to coefficients, exact on a window.

    Coefficients are Fractions or any vector-like object supporting ``+``,
    ``-``, scalar multiplication by Fractions and truthiness (falsy = zero).
    """

    __slots__ = ("vars", "terms", "window")

    def __init__(self, variables: Iterable[str], terms: Mapping | None = None,
                 window: Window | Mapping | None = None):
        self.vars = tuple(variables)
        if len(set(self.vars)) != len(self.vars):
            raise ValueError(f"repeated variable in {self.vars}")
        if window is None:
            window = Window()
        elif not isinstance(window, Window):
            window = Window(window)
        self.window = Window({v: b for v, b in window.bounds.items() if v in self.vars})
        clean = {}
        for powers, c in (terms or {}).items():
            powers = tuple(Fraction(p) for p in powers)
            if len(powers) != len(self.vars):
                raise ValueError("power tuple does not match variables")
            if _is_zero(c) or not self.window.contains(self.vars, powers):
                continue
            clean[powers] = c
        self.terms = clean

    # construction -----------------------------------------------------
    @classmethod
    def monomial(cls, variables, powers, coeff=Fraction(1)):
        return cls(variables, {tuple(powers): coeff})

    @classmethod
    def const(cls, variables, coeff=Fraction(1)):
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): coeff})

    @classmethod
    def from_modes(cls, variables, modes: Mapping, window=None):
        """Build from mode coefficients a_{n1..nr} of prod z_i^{-n_i-1}."""
        terms = {tuple(-Fraction(n) - 1 for n in key): c for key, c in modes.items()}
        return cls(variables, terms, window)

    @classmethod
    def zero(cls, variables, window=None):
        return cls(variables, {}, window)

    # access -----------------------------------------------------------
    def coeff(self, powers):
        return self.terms.get(tuple(Fraction(p) for p in powers), 0)

    def mode(self, *ns):
        return self.coeff([-Fraction(n) - 1 for n in ns])

    def is_zero(self) -> bool:
        return not self.terms

    def is_exact(self) -> bool:
        return self.window.is_full

    def support(self, var) -> tuple:
        i = self.vars.index(var)
        ps = [k[i] for k in self.terms]
        return (min(ps), max(ps)) if ps else (None, None)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"Distribution({self.vars}, {self.render()!r}, {self.window!r})"

    # variable bookkeeping ---------------------------------------------
    def with_vars(self, variables) -> "Distribution":
        """Re-express over a superset of variables (new ones get power 0)."""
        variables = tuple(variables)
        missing = [v for v in self.vars if v not in variables]
        if missing:
            raise ValueError(f"variables {missing} would be dropped")
        idx = [self.vars.index(v) if v in self.vars else None for v in variables]
        terms = {tuple(k[i] if i is not None else Fraction(0) for i in idx): c
                 for k, c in self.terms.items()}
        return Distribution(variables, terms, self.window)

    def rename(self, mapping: Mapping[str, str]) -> "Distribution":
        variables = tuple(mapping.get(v, v) for v in self.vars)
        return Distribution(variables, self.terms, self.window.renamed(mapping))

    def swap(self, a: str, b: str) -> "Distribution":
        return self.rename({a: b, b: a})

    def _aligned(self, other):
        variables = self.vars + tuple(v for v in other.vars if v not in self.vars)
        return self.with_vars(variables), other.with_vars(variables)

    # linear structure ---------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Distribution):
            return NotImplemented
        a, b = self._aligned(other)
        terms = dict(a.terms)
        for k, c in b.terms.items():
            terms[k] = terms[k] + c if k in terms else c
        return Distribution(a.vars, terms, a.window.intersect(b.window))

    def __neg__(self):
        return Distribution(self.vars, {k: -c for k, c in self.terms.items()}, self.window)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "Distribution":
        s = Fraction(s)
        return Distribution(self.vars, {k: s * c for k, c in self.terms.items()}, self.window)

    def __rmul__(self, s):
        if isinstance(s, (int, Fraction)):
            return self.scale(s)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Distribution):
            return NotImplemented
        return multiply(self, other)

    def restrict_window(self, window) -> "Distribution":
        if not isinstance(window, Window):
            window = Window(window)
        return Distribution(self.vars, self.terms, self.window.intersect(window))

    def agrees_with(self, other: "Distribution") -> bool:
        """Equality on the common window."""
        return not self.disagreements(other)

    def disagreements(self, other: "Distribution") -> list:
        a, b = self._aligned(other)
        win = a.window.intersect(b.window)
        bad = []
        for k in set(a.terms) | set(b.terms):
            if not win.contains(a.vars, k):
                continue
            if _is_zero(a.terms.get(k, 0) - b.terms.get(k, 0)):
                continue
            bad.append(k)
        return sorted(bad)

    # calculus -----------------------------------------------------------
    def residue(self, var) -> "Distribution":
        i = self.vars.index(var)
        lo, hi = self.window.get(var)
        if (lo is not None and lo > -1) or (hi is not None and hi < -1):
            raise WindowError(f"res_{var} needs the power -1 inside the window")
        terms = {k[:i] + k[i + 1:]: c for k, c in self.terms.items() if k[i] == -1}
        return Distribution(self.vars[:i] + self.vars[i + 1:], terms, self.window.without(var))

    def derivative(self, var, n: int = 1) -> "Distribution":
        """Divided-power derivative d^{(n)}/dvar^{(n)}."""
        if n < 0:
            return Distribution.zero(self.vars, self.window)
        if var not in self.vars:
            return self if n == 0 else Distribution.zero(self.vars, self.window)
        i = self.vars.index(var)
        terms = {}
        for k, c in self.terms.items():
            f = binom(k[i], n)
            if f:
                nk = k[:i] + (k[i] - n,) + k[i + 1:]
                terms[nk] = f * c
        return Distribution(self.vars, terms, self.window.shifted(var, -n))

    def mul_monomial(self, var, h) -> "Distribution":
        h = Fraction(h)
        d = self if var in self.vars else self.with_vars(self.vars + (var,))
        i = d.vars.index(var)
        terms = {k[:i] + (k[i] + h,) + k[i + 1:]: c for k, c in d.terms.items()}
        return Distribution(d.vars, terms, d.window.shifted(var, h))

    def restrict(self, predicate: Callable[[dict], bool]) -> "Distribution":
        """Keep the terms whose power assignment {var: power} satisfies predicate."""
        terms = {k: c for k, c in self.terms.items() if predicate(dict(zip(self.vars, k)))}
        return Distribution(self.vars, terms, self.window)

    def diagonal(self, keep: str, drop: str, truncated: bool = False) -> "Distribution":
        """Set drop = keep: coefficient of keep^P is the sum over p + q = P."""
        i, j = self.vars.index(keep), self.vars.index(drop)
        win = self.window
        if not truncated:
            lo_k, hi_k = win.get(keep)
            lo_d, hi_d = win.get(drop)
            bounds = _sum_bounds(lo_k, hi_k, self.support(keep), lo_d, hi_d, self.support(drop))
            if bounds is None:
                raise SummabilityError("diagonal not summable on this window; pass truncated=True"
                                       " to treat the stored terms as the whole object")
            new_win = win.without(drop).without(keep)
            new_win = new_win.intersect(Window({keep: bounds}))
        else:
            new_win = Window()
        terms: dict = {}
        variables = tuple(v for v in self.vars if v != drop)
        for k, c in self.terms.items():
            nk = list(k)
            nk[i] = k[i] + k[j]
            del nk[j]
            nk = tuple(nk)
            terms[nk] = terms[nk] + c if nk in terms else c
        return Distribution(variables, terms, new_win)

    def substitute(self, var, mu, a, nu, b, region=None, window=None) -> "Distribution":
        """Replace var^p by (mu*a + nu*b)^p expanded in the given region.

        The region defaults to a > b.  Each output monomial a^x b^y comes from
        the single source power p = x + y, so the window on (a, b) must keep
        x + y inside the source window of var.
        """
        region = region or f"{a}>{b}"
        window = Window(window) if not isinstance(window, Window) else window
        lo_v, hi_v = self.window.get(var)
        (la, ha), (lb, hb) = window.get(a), window.get(b)
        lo_s = None if la is None or lb is None else la + lb
        hi_s = None if ha is None or hb is None else ha + hb
        if (lo_v is not None and (lo_s is None or lo_s < lo_v)) or \
                (hi_v is not None and (hi_s is None or hi_s > hi_v)):
            raise WindowError("output window reaches outside the source window")
        i = self.vars.index(var)
        rest_vars = self.vars[:i] + self.vars[i + 1:]
        out = Distribution.zero(rest_vars + (a, b), self.window.without(var).intersect(window))
        acc: dict = {}
        for k, c in self.terms.items():
            p = k[i]
            exp = expand_power(mu, nu, p, region=region, window=window, variables=(a, b))
            rest = k[:i] + k[i + 1:]
            for (x, y), e in exp.terms.items():
                key = rest + (x, y)
                acc[key] = acc[key] + e * c if key in acc else e * c
        return Distribution(out.vars, acc, out.window)

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms, reverse=True):
            c = self.terms[k]
            cs = render_scalar(c) if isinstance(c, (int, Fraction)) else f"({c})"
            factors = [cs]
            for v, p in zip(self.vars, k):
                if p == 0:
                    continue
                ps = render_scalar(p)
                factors.append(f"{v}^{ps}" if p > 0 and p.denominator == 1 else f"{v}^({ps})")
            parts.append(" * ".join(factors))
        return " + ".join(parts)


def _sum_bounds(la, ha, supp_a, lb, hb, supp_b):
    """Window of a convolution in one variable, or None when nothing is certified.

    Data of A is exact on [la, ha]; outside it is unknown.  A term of the
    sum with A unknown must be multiplied by a coefficient of B certified
    zero, which forces the opposite bound of B to be open.
    """
    mina, maxa = supp_a
    minb, maxb = supp_b
    hi = None
    lo = None

    def tighten_hi(v):
        nonlocal hi
        hi = v if hi is None else min(hi, v)

    def tighten_lo(v):
        nonlocal lo
        lo = v if lo is None else max(lo, v)

    for (l1, h1), (l2, h2), (min2, max2) in (((la, ha), (lb, hb), (minb, maxb)),
                                             ((lb, hb), (la, ha), (mina, maxa))):
        if h1 is not None:
            if l2 is not None:
                return None
            if min2 is not None:
                tighten_hi(h1 + min2)
        if l1 is not None:
            if h2 is not None:
                return None
            if max2 is not None:
                tighten_lo(l1 + max2)
    return (lo, hi)


def multiply(a: Distribution, b: Distribution) -> Distribution:
    """Product of distributions; the result window is what both windows certify."""
    a, b = a._aligned(b)
    if not a.terms or not b.terms:
        win = a.window.intersect(b.window) if (a.terms or b.terms) else Window()
        return Distribution(a.vars, {}, win)
    bounds = {}
    for var in a.vars:
        la, ha = a.window.get(var)
        lb, hb = b.window.get(var)
        if la is None and ha is None and lb is None and hb is None:
            continue
        r = _sum_bounds(la, ha, a.support(var), lb, hb, b.support(var))
        if r is None:
            raise WindowError(f"product not determined in variable {var}")
        bounds[var] = r
    win = Window(bounds)
    if win.is_empty():
        raise WindowError("product window is empty")
    terms: dict = {}
    for ka, ca in a.terms.items():
        for kb, cb in b.terms.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            if not win.contains(a.vars, k):
                continue
            v = ca * cb if isinstance(ca, (int, Fraction)) else cb * ca
            terms[k] = terms[k] + v if k in terms else v
    return Distribution(a.vars, terms, win)


# -------------------------------------------------------------------------
# expansions of powers and the delta distribution


def _sign_power(mu, e, what):
    if mu == 1:
        return 1
    if mu != -1:
        raise ValueError("mu and nu must be +1 or -1")
    try:
        return signed_power(e)
    except NonStatisticalExponent as exc:
        raise NonStatisticalExponent(f"{what}: {exc}") from None


def _count_limit(h, lead_bound, tail_bound):
    """Largest i with tail power i <= tail_bound and lead power h - i >= lead_bound."""
    limits = []
    if tail_bound is not None:
        limits.append(tail_bound)
    if lead_bound is not None:
        limits.append(h - lead_bound)
    if not limits:
        return None
    lim = min(limits)
    return int(lim // 1) if lim >= 0 else -1


def expand_power(mu, nu, h, region="z>w", window=None, variables=None) -> Distribution:
    """Windowed expansion of (mu*z + nu*w)^h in the given region.

    ``h`` is a scalar for one variable pair (default variables ``z, w``) or a
    pair (h, hbar) for the checked pair ``z, zbar, w, wbar``.  A pair exponent
    must be statistical (h - hbar an integer); then the product of the two
    expansions does not depend on any branch of (-1)^h.
    """
    window = window if isinstance(window, Window) else Window(window)
    mu, nu = int(mu), int(nu)
    if isinstance(h, (tuple, list)):
        return _expand_pair(mu, nu, tuple(Fraction(x) for x in h), region, window, variables)
    h = Fraction(h)
    z, w = variables or ("z", "w")
    if region in ("z>w", f"{z}>{w}"):
        lead, tail, ml, mt = z, w, mu, nu
    elif region in ("w>z", f"{w}>{z}"):
        lead, tail, ml, mt = w, z, nu, mu
    else:
        raise ValueError(f"unknown region {region!r}")
    imax = _count_limit(h, window.get(lead)[0], window.get(tail)[1])
    if imax is None:
        if h.denominator == 1 and h >= 0:
            imax = int(h)
        else:
            raise WindowError("expansion of a negative or fractional power needs a bounded window")
    if h.denominator == 1 and h >= 0:
        imax = min(imax, int(h))
    terms = {}
    for i in range(imax + 1):
        c = binom(h, i)
        if not c:
            continue
        sign = _sign_power(ml, h + i, f"({ml}{lead})^{h}") * (mt ** i)
        powers = {lead: h - i, tail: Fraction(i)}
        terms[(powers[z], powers[w])] = sign * c
    return Distribution((z, w), terms, window)


def _expand_pair(mu, nu, hh, region, window, variables):
    h, hb = hh
    if (h - hb).denominator != 1:
        raise NonStatisticalExponent(f"pair exponent ({h}, {hb}) is not statistical")
    z, zb, w, wb = variables or ("z", "zbar", "w", "wbar")
    if region in ("z>w", f"{z}>{w}"):
        lead, leadb, tail, tailb, ml, mt = z, zb, w, wb, mu, nu
    elif region in ("w>z", f"{w}>{z}"):
        lead, leadb, tail, tailb, ml, mt = w, wb, z, zb, nu, mu
    else:
        raise ValueError(f"unknown region {region!r}")
    limits = []
    for e, lv, tv in ((h, lead, tail), (hb, leadb, tailb)):
        lim = _count_limit(e, window.get(lv)[0], window.get(tv)[1])
        if e.denominator == 1 and e >= 0:
            lim = int(e) if lim is None else min(lim, int(e))
        if lim is None:
            raise WindowError("expansion of a negative or fractional power needs a bounded window")
        limits.append(lim)
    terms = {}
    for i, ib in iproduct(range(limits[0] + 1), range(limits[1] + 1)):
        c = binom(h, i) * binom(hb, ib)
        if not c:
            continue
        sign = signed_power(h - hb + i + ib) if ml == -1 else 1
        sign *= mt ** (i + ib)
        powers = {lead: h - i, leadb: hb - ib, tail: Fraction(i), tailb: Fraction(ib)}
        terms[(powers[z], powers[zb], powers[w], powers[wb])] = sign * c
    return Distribution((z, zb, w, wb), terms, window)


def _int_range(lo, hi):
    import math
    return range(math.ceil(lo), math.floor(hi) + 1)


def shifted_delta(h, window, variables=("z", "w")) -> Distribution:
    """delta_h(z, w) = sum_{n in h + Z} w^n z^{-n-1}, materialized on a bounded window."""
    h = Fraction(h)
    window = window if isinstance(window, Window) else Window(window)
    z, w = variables
    lz, hz = window.get(z)
    lw, hw = window.get(w)
    lows = [x for x in (lw, None if hz is None else -hz - 1) if x is not None]
    highs = [x for x in (hw, None if lz is None else -lz - 1) if x is not None]
    if not lows or not highs:
        raise WindowError("delta distribution needs a window bounded on both sides")
    lo, hi = max(lows), min(highs)
    terms = {}
    for k in _int_range(lo - h, hi - h):
        n = h + k
        terms[(-n - 1, n)] = Fraction(1)
    return Distribution((z, w), terms, window)


def delta(window, variables=("z", "w")) -> Distribution:
    return shifted_delta(0, window, variables)


def taylor_split(d: Distribution, z: str, w: str, n_terms: int):
    """Split d = sum_{n<N} c_n(w) (z-w)^n + (z-w)^N r(z, w).

    ``c_n`` is the divided-power derivative d_z^{(n)} d evaluated at z = w.
    Only exact Laurent-polynomial input is accepted.
    """
    if not d.is_exact():
        raise WindowError("taylor_split needs an exact (unwindowed) input")
    if w not in d.vars:
        d = d.with_vars(d.vars + (w,))
    zw = Distribution.monomial((z, w), (1, 0)) - Distribution.monomial((z, w), (0, 1))
    coeffs = []
    poly = Distribution.zero(d.vars)
    power = Distribution.const((z, w))
    for n in range(n_terms):
        c_n = d.derivative(z, n).diagonal(w, z)
        coeffs.append(c_n)
        poly = poly + c_n * power
        power = power * zw
    remainder = d - poly
    for _ in range(n_terms):
        remainder = divide_by_difference(remainder, z, w)
    return coeffs, remainder


def divide_by_difference(d: Distribution, z: str, w: str) -> Distribution:
    """Exact quotient of a Laurent polynomial by (z - w); raises if not divisible."""
    i, j = d.vars.index(z), d.vars.index(w)
    groups: dict = {}
    for k, c in d.terms.items():
        # only terms in the same coset of z and w exponents interact
        key = tuple(p for t, p in enumerate(k) if t not in (i, j)) + (k[i] % 1, k[i] + k[j])
        groups.setdefault(key, {})[k] = c
    out: dict = {}
    for terms in groups.values():
        zmin = min(k[i] for k in terms)
        # shift z powers to a polynomial, then synthetic division by the root z = w
        by_deg: dict = {}
        for k, c in terms.items():
            deg = int(k[i] - zmin)
            by_deg.setdefault(deg, {})
            wk = k[:i] + (Fraction(0),) + k[i + 1:]
            by_deg[deg][wk] = by_deg[deg].get(wk, 0) + c
        top = max(by_deg)
        carry: dict = {}
        quotient = {}
        for deg in range(top, 0, -1):
            cur = dict(by_deg.get(deg, {}))
            for k, c in carry.items():
                cur[k] = cur.get(k, 0) + c
            cur = {k: c for k, c in cur.items() if not _is_zero(c)}
            quotient[deg - 1] = cur
            carry = {}
            for k, c in cur.items():
                nk = k[:j] + (k[j] + 1,) + k[j + 1:]
                carry[nk] = c
        last = dict(by_deg.get(0, {}))
        for k, c in carry.items():
            last[k] = last.get(k, 0) + c
        if any(not _is_zero(c) for c in last.values()):
            raise ValueError(f"not divisible by ({z} - {w})")
        for deg, cur in quotient.items():
            for k, c in cur.items():
                nk = k[:i] + (zmin + deg,) + k[i + 1:]
                out[nk] = out[nk] + c if nk in out else c
    return Distribution(d.vars, out)
