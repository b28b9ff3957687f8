"""Delta calculus and expansions, checked coefficientwise against tests/oracles.py."""
from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from opecalc.distribution import (Distribution, NonStatisticalExponent, Window, WindowError,
                                  delta, expand_power, multiply)

N_RANGE = range(-10, 11)
W10 = Window({"z": (-10, 10), "w": (-10, 10)})


def _poly(terms):
    return Distribution(("z", "w"), {k: Fraction(c) for k, c in terms.items()})


def test_delta_matches_oracle():
    d = delta(W10)
    for pz in range(-10, 11):
        for pw in range(-10, 11):
            assert d.coeff((pz, pw)) == oracles.delta_coeff(pz, pw)


@pytest.mark.parametrize("n", [k for k in N_RANGE if k >= 0])
def test_delta_derivative_matches_oracle(n):
    d = delta(W10).derivative("w", n)
    lo, hi = d.window.get("w")
    for pz in range(-10, 11):
        for pw in range(int(lo), int(hi) + 1):
            assert d.coeff((pz, pw)) == oracles.delta_derivative_coeff(n, pz, pw)


def test_delta_absorbs_polynomial():
    a = _poly({(2, -1): 3, (-3, 0): -1, (0, 0): 5, (1, 4): Fraction(2, 7)})
    a_ww = _poly({(0, 1): 3, (0, -3): -1, (0, 0): 5, (0, 5): Fraction(2, 7)})
    lhs = multiply(delta(W10), a)
    rhs = multiply(delta(W10), a_ww)
    assert lhs.terms and lhs.agrees_with(rhs)


def test_delta_symmetric():
    d = delta(W10)
    assert d.swap("z", "w").agrees_with(d)


@pytest.mark.parametrize("n", N_RANGE)
def test_dw_is_minus_dz(n):
    d = delta(W10).derivative("w", n) if n >= 0 else delta(W10)
    lhs = d.derivative("w")
    rhs = -d.derivative("z")
    assert lhs.terms and lhs.agrees_with(rhs)


@pytest.mark.parametrize("n", N_RANGE)
def test_z_minus_w_lowers_derivative(n):
    d = delta(W10)
    dn = d.derivative("w", n)
    lhs = dn.mul_monomial("z", 1) - dn.mul_monomial("w", 1)
    rhs = d.derivative("w", n - 1)
    assert lhs.agrees_with(rhs)
    if n >= 1:
        assert rhs.terms


@pytest.mark.parametrize("n", N_RANGE)
def test_delta_derivative_is_difference_of_expansions(n):
    dn = delta(W10).derivative("w", n)
    win = Window({"z": (-25, 25), "w": (-25, 25)})
    zw = expand_power(1, -1, -n - 1, "z>w", win)
    wz = expand_power(1, -1, -n - 1, "w>z", win)
    assert dn.agrees_with(zw - wz)
    if n >= 0:
        assert zw.terms and wz.terms


@pytest.mark.parametrize("n", [k for k in N_RANGE if k >= 0])
def test_restriction_splits_delta(n):
    dn = delta(W10).derivative("w", n)
    win = Window({"z": (-25, 25), "w": (-25, 25)})
    neg = dn.restrict(lambda p: p["z"] < 0)
    pos = dn.restrict(lambda p: p["z"] >= 0)
    assert neg.agrees_with(expand_power(1, -1, -n - 1, "z>w", win))
    assert pos.agrees_with(-expand_power(1, -1, -n - 1, "w>z", win))


def jacobi_for_identity(bound=10):
    """delta(z, w+x) against delta(x, z-w) - delta(x, z-w)_{w>z} on a box; returns both sides."""
    out = Window({"w": (-bound, bound), "x": (-bound, bound)})
    lhs = delta(Window({"z": (-bound, bound), "u": (-2 * bound, 2 * bound)}), ("z", "u"))
    lhs = lhs.substitute("u", 1, "w", 1, "x", region="w>x", window=out)
    d = delta(Window({"x": (-bound, bound), "y": (-2 * bound, 2 * bound)}), ("x", "y"))
    r1 = d.substitute("y", 1, "z", -1, "w", region="z>w", window=Window({"z": (-bound, bound), "w": (-bound, bound)}))
    r2 = d.substitute("y", 1, "z", -1, "w", region="w>z", window=Window({"z": (-bound, bound), "w": (-bound, bound)}))
    return lhs, (r1 - r2).with_vars(lhs.vars)


def test_jacobi_for_identity():
    lhs, rhs = jacobi_for_identity()
    assert lhs.terms
    assert lhs.disagreements(rhs) == []


def test_jacobi_for_identity_is_sensitive():
    lhs, _ = jacobi_for_identity(6)
    d = delta(Window({"x": (-6, 6), "y": (-12, 12)}), ("x", "y"))
    only_one = d.substitute("y", 1, "z", -1, "w", region="z>w",
                            window=Window({"z": (-6, 6), "w": (-6, 6)})).with_vars(lhs.vars)
    assert lhs.disagreements(only_one)


# -- expansions ---------------------------------------------------------


@pytest.mark.parametrize("n", range(6))
def test_z_greater_w_expansion(n):
    e = expand_power(1, -1, -n - 1, "z>w", Window({"z": (-21, None), "w": (None, 20)}))
    for m in range(21):
        assert e.coeff((-m - 1, m - n)) == oracles.binom(m, n)
    assert all(p[0] <= -n - 1 for p in e.terms)


def _rational_exponents(count, seed):
    rng = random.Random(seed)
    return [Fraction(rng.randint(-40, 40), rng.choice([1, 2, 3, 4, 5, 7])) for _ in range(count)]


def _expansion_window(h):
    # lead power stays >= h - 12, tail power <= 12
    return Window({"z": (h - 12, None), "w": (None, 12)})


@pytest.mark.parametrize("mu,nu", [(1, 1), (1, -1)])
def test_expansion_matches_oracle(mu, nu):
    for h in _rational_exponents(50, 1):
        e = expand_power(mu, nu, h, "z>w", _expansion_window(h))
        for i in range(13):
            assert e.coeff((h - i, i)) == oracles.expansion_coeff(mu, nu, h, i)


def test_power_map_multiplicative():
    hs = _rational_exponents(50, 2)
    for h, g in zip(hs, hs[1:] + hs[:1]):
        a = expand_power(1, -1, h, "z>w", _expansion_window(h))
        b = expand_power(1, -1, g, "z>w", _expansion_window(g))
        prod = multiply(a, b)
        whole = expand_power(1, -1, h + g, "z>w", _expansion_window(h + g))
        assert prod.terms and prod.agrees_with(whole)


def test_power_map_dw_compatible():
    for h in _rational_exponents(50, 3):
        e = expand_power(1, -1, h, "z>w", _expansion_window(h))
        lhs = e.derivative("w")
        rhs = expand_power(1, -1, h - 1, "z>w", _expansion_window(h - 1)).scale(-h)
        assert lhs.agrees_with(rhs)
        if h != 0:
            assert lhs.terms


@settings(max_examples=60, deadline=None)
@given(st.fractions(min_value=-20, max_value=20, max_denominator=9), st.integers(0, 8))
def test_expansion_coefficients_property(h, i):
    e = expand_power(1, 1, h, "z>w", _expansion_window(h))
    assert e.coeff((h - i, i)) == oracles.binom(h, i)


def _statistical_pairs(count, seed):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        h = Fraction(rng.randint(-12, 12), rng.choice([1, 2, 3, 5]))
        out.append((h, h - rng.randint(-4, 4)))
    return out


W2 = Window({"z": (-30, None), "zbar": (-30, None), "w": (None, 6), "wbar": (None, 6)})


def _oracle_pair(mu, nu, h, hb, i, ib):
    sign = 1 if mu == 1 else (-1) ** abs(int(h - hb + i + ib))
    return oracles.binom(h, i) * oracles.binom(hb, ib) * sign * Fraction(nu) ** (i + ib)


@pytest.mark.parametrize("mu,nu", [(1, 1), (1, -1), (-1, 1), (-1, -1)])
def test_two_variable_expansion(mu, nu):
    for h, hb in _statistical_pairs(20, 4):
        e = expand_power(mu, nu, (h, hb), "z>w", W2)
        for i in range(7):
            for ib in range(7):
                assert e.coeff((h - i, hb - ib, i, ib)) == _oracle_pair(mu, nu, h, hb, i, ib)


@pytest.mark.parametrize("mu,nu", [(1, 1), (1, -1)])
def test_two_variable_sign_law(mu, nu):
    for h, hb in _statistical_pairs(20, 5):
        plus = expand_power(mu, nu, (h, hb), "z>w", W2)
        minus = expand_power(-mu, -nu, (h, hb), "z>w", W2)
        assert plus.terms
        assert minus.agrees_with(plus.scale((-1) ** abs(int(h - hb))))


def test_non_statistical_pair_rejected():
    with pytest.raises(NonStatisticalExponent):
        expand_power(1, -1, (Fraction(1, 2), 0), "z>w", W2)


def test_unbounded_negative_power_rejected():
    with pytest.raises(WindowError):
        expand_power(1, -1, -1, "z>w", Window())
