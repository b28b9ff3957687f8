from __future__ import annotations

from fractions import Fraction

import pytest

import oracles
from opecalc import vertexalg as va
from opecalc.fieldcalc import Vector


def test_heisenberg_character():
    ch = va.heisenberg(1, 6).character(6)
    assert list(ch.values()) == oracles.heisenberg_character(6) == [1, 1, 2, 3, 5, 7, 11]


@pytest.mark.parametrize("c", [Fraction(1, 2), Fraction(1), Fraction(26)])
def test_virasoro_character(c):
    ch = va.virasoro(c, 6).character(6)
    assert list(ch.values()) == oracles.virasoro_character(6) == [1, 0, 1, 1, 2, 2, 4]


def test_clifford_character_counts_distinct_half_odd_parts():
    ch = va.clifford1(1, 6).character(6)
    assert ch == oracles.fermion_character(6)
    assert ch[Fraction(1, 2)] == 1 and ch[Fraction(1)] == 0


def test_affine_sl2_character():
    assert list(va.affine_sl2(1, 4).character(4).values()) == oracles.sl2_character(4)


def test_tensor_character_is_convolution():
    H = va.heisenberg(1, 4)
    T = va.tensor_product(H, va.heisenberg(1, 4), cutoff=4)
    one = oracles.heisenberg_character(4)
    want = [sum(one[i] * one[n - i] for i in range(n + 1)) for n in range(5)]
    assert list(T.character(4).values()) == want


def test_vacuum_and_creation():
    V = va.heisenberg(1, 4)
    a = V.gen_state("a")
    vac = V.vacuum()
    assert V.product(vac, -1, a) == a
    assert V.product(a, -1, vac) == a
    assert V.product(a, -2, vac) == V.T(a)
    assert not V.T(vac)


def test_heisenberg_products():
    V = va.heisenberg(Fraction(3), 4)
    a = V.gen_state("a")
    vac = V.vacuum()
    assert V.product(a, 1, a) == vac.scale(3)
    assert not V.product(a, 0, a)
    assert va.state_label(V, V.product(a, 1, a)) == "k"


@pytest.mark.parametrize("name", ["heisenberg", "virasoro", "clifford1"])
def test_axiom_sweep_small(name):
    V = va.HOLOMORPHIC_CATALOG[name](cutoff=3) if name != "virasoro" else va.virasoro(Fraction(26), 3)
    rep = va.verify_axioms(V, va.SweepConfig(cutoff=3, index_box=(-2, 2)))
    assert rep.ok, rep.to_text()
    for kind in ("jacobi", "duality", "locality", "associativity_formula", "commutator_formula",
                 "skew_symmetry", "vacuum", "translation"):
        assert rep.counts[kind]["pass"] > 0, kind


def test_affine_sl2_sampled_sweep():
    V = va.affine_sl2(1, 4)
    rep = va.verify_axioms(V, va.SweepConfig(cutoff=4, sample=60, seed=2))
    assert rep.ok and rep.meta["sample"] == 60


def test_poly_comm_sweep():
    rep = va.verify_axioms(va.poly_comm(4), va.SweepConfig(cutoff=0))
    assert rep.ok and rep.passed > 0


def test_tensor_product_axioms():
    T = va.tensor_product(va.heisenberg(1, 2), va.clifford1(1, 2), cutoff=2)
    rep = va.verify_axioms(T, va.SweepConfig(cutoff=2, index_box=(-2, 2),
                                             kinds=("jacobi", "skew_symmetry", "vacuum")))
    assert rep.ok and rep.passed > 0


def test_mutation_is_reported_with_witness():
    from suites import mutated_heisenberg

    V = mutated_heisenberg()
    rep = va.verify_axioms(V, va.SweepConfig(cutoff=2, index_box=(-2, 2)))
    fails = rep.failures()
    assert fails
    assert all(f.witness for f in fails)
    assert V.R.axiom_failures()


def test_invalid_opes_rejected():
    gens = [va.Generator("a", 0, 1)]
    with pytest.raises(va.ConformalAlgebraError):
        va.ConformalAlgebra(gens, {("a", "a", 0): {(0, "a"): 1}, ("a", "a", 1): {(0, "k"): 1}})
    with pytest.raises(va.ConformalAlgebraError):
        # weight mismatch: a_(1)a has weight 0
        va.ConformalAlgebra(gens, {("a", "a", 1): {(0, "a"): 1}})


def test_sugawara_vector():
    from suites import sugawara_verdicts

    good, raw = sugawara_verdicts()
    assert good.as_tuple() == (True, 1, True)
    assert raw.is_conformal is False


def test_virasoro_vector_in_virasoro_algebra():
    V = va.virasoro(Fraction(26), 4)
    verdict = va.conformal_vector_check(V, V.gen_state("L"))
    assert verdict.as_tuple() == (True, 26, True)


def test_conformal_check_rejects_wrong_weight():
    V = va.heisenberg(1, 4)
    assert not va.conformal_vector_check(V, V.gen_state("a")).is_virasoro


def test_level_scaling_of_sugawara():
    """At level k the normalized vector is a_(-1)a / (2k)."""
    V = va.heisenberg(Fraction(5), 4)
    a = V.gen_state("a")
    omega = V.product(a, -1, a).scale(Fraction(1, 10))
    assert va.conformal_vector_check(V, omega).as_tuple() == (True, 1, True)


def test_render_of_states():
    V = va.affine_sl2(1, 3)
    e, f = V.gen_state("e"), V.gen_state("f")
    assert va.state_label(V, V.product(e, 0, f)) == V.render(V.gen_state("h"))
    assert V.render(Vector()) == "0"
