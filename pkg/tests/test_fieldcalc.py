from __future__ import annotations

from fractions import Fraction
from itertools import product as iproduct

import pytest

from opecalc import fieldcalc as fc
from opecalc import vertexalg as va
from opecalc.fieldcalc import Vector


@pytest.fixture(scope="module")
def heis():
    return va.heisenberg(1, 4)


@pytest.fixture(scope="module")
def vir():
    return va.virasoro(Fraction(1, 2), 4)


def _key(V, g):
    return next(iter(V.gen_state(g)))


def test_identity_field_is_unit(heis):
    one = fc.identity_field(heis)
    a = heis.generator_field("a")
    for n in range(-3, 3):
        assert fc.fields_agree(fc.nth_product(one, a, -1), a, 3)[0]
        assert fc.field_is_zero(fc.nth_product(one, a, n), 3) == (n != -1)


def test_field_of_state_matches_nth_product(heis):
    """Y(a_(n)b) = Y(a)_(n) Y(b) on the window, the state-field correspondence."""
    basis = [k for k in heis.basis(2) if k]
    for x, y in iproduct(basis, repeat=2):
        for n in range(-2, 3):
            state = heis.product({x: 1}, n, {y: 1})
            if not state:
                continue
            if heis.weight(x) + heis.weight(y) - n - 1 > 3:
                continue
            f = fc.nth_product(heis.Y({x: 1}), heis.Y({y: 1}), n)
            ok, wit = fc.fields_agree(f, heis.Y(state), 3)
            assert ok, wit


def test_derivative_field(heis):
    a = heis.generator_field("a")
    da = fc.derivative_field(a)
    ta = heis.Y(heis.T(heis.gen_state("a")))
    assert fc.fields_agree(da, ta, 3)[0]
    # d^(2) a = a_(-3)1 as a state
    d2 = fc.derivative_field(a, 2)
    k = ((3, 0),)
    assert fc.fields_agree(d2, heis.Y({k: 1}), 3)[0]


@pytest.mark.parametrize("name,gen,order", [("heisenberg", "a", 2), ("clifford1", "psi", 1),
                                            ("affine_sl2", "e", 0)])
def test_locality_orders(name, gen, order):
    V = va.HOLOMORPHIC_CATALOG[name](cutoff=3)
    f = V.generator_field(gen)
    res = fc.locality_order(f, f, 3)
    assert res.order == order
    assert res.commutator_vanishes == (order == 0)


def test_virasoro_locality_order(vir):
    L = vir.generator_field("L")
    assert fc.locality_order(L, L, 4).order == 4


def test_commutator_formula_from_ope(vir):
    L = vir.generator_field("L")
    ope = fc.ope_singular(L, L, 4)
    assert [n for n, _ in ope] == [3, 1, 0]
    for key in vir.basis(2):
        for p, q in iproduct(range(-2, 4), repeat=2):
            if vir.weight(key) + 2 - p + 2 - q - 2 > 4:
                continue
            assert fc.commutator(L, L, p, q, key) == fc.commutator_from_ope(ope, p, q, key)


def test_heisenberg_modes_commute_to_central(heis):
    a = heis.generator_field("a")
    for key in heis.basis(2):
        for p, q in iproduct(range(-3, 3), repeat=2):
            want = Vector({key: p}) if p + q == 0 and p else Vector()
            assert fc.commutator(a, a, p, q, key) == want


def test_dong_bound_arithmetic():
    assert fc.dong_bound(2, 2, 2, 0) == 5
    assert fc.dong_bound(0, 0, 0, 3) == 0


def test_dong_bound_holds_on_samples():
    from suites import dong_triples

    rows = dong_triples(count_per_algebra=8, seed=11)
    assert all(r[5] is not None and r[5] <= r[6] for r in rows), [r for r in rows if r[5] > r[6]]


@pytest.mark.parametrize("kind", fc.IDENTITY_KINDS)
def test_identity_sweep_heisenberg(kind, heis):
    basis = heis.basis(2)
    box = range(-2, 3)
    rep = None
    for a, b, c in iproduct(basis, repeat=3):
        rep = fc.check_identity(kind, heis, a, b, c, box, box, box, 3, rep)
    assert rep.ok and rep.passed > 0


def test_identity_sweep_detects_wrong_sign(heis):
    """A fake algebra whose product flips a sign must fail Jacobi."""

    class Flipped:
        bounded_below = True
        min_weight = heis.min_weight

        def __getattr__(self, attr):
            return getattr(heis, attr)

        def product(self, a, n, c):
            out = heis.product(a, n, c)
            return out.scale(-1) if n == 1 else out

    alg = Flipped()
    a = _key(heis, "a")
    vac = next(iter(heis.vacuum()))
    rep = fc.check_identity("jacobi", alg, a, a, a, range(-2, 3), range(-2, 3), range(-2, 3), 3)
    rep2 = fc.check_identity("jacobi", alg, a, a, vac, range(-2, 3), range(-2, 3), range(-2, 3), 3)
    assert not (rep.ok and rep2.ok)


def test_skew_symmetry_poly_comm():
    P = va.poly_comm(4)
    rep = None
    for a, b in iproduct(P.basis(), repeat=2):
        rep = fc.check_skew_symmetry(P, a, b, range(-3, 4), 0, rep)
    assert rep.ok and rep.passed > 0


def test_undetermined_above_limit(heis):
    a = heis.generator_field("a")
    capped = fc.Field(heis, 1, 0, lambda n, k: a.act(n, k), limit=2)
    with pytest.raises(fc.UndeterminedAboveCutoff):
        capped.act(-4, ())
