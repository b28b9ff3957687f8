"""Acceptance-level checks, one function per criterion.

Each returns ``(ok, detail)``.  The module tests exercise the same
machinery in finer pieces; these functions aggregate to one verdict and
are what tests/test_acceptance.py prints.
"""
from __future__ import annotations

import json
import os
import random
import subprocess
import sys
from fractions import Fraction
from itertools import product as iproduct
from pathlib import Path

import oracles
from opecalc import fieldcalc as fc
from opecalc import liealg, ope2d
from opecalc import vertexalg as va
from opecalc.distribution import Window, delta, expand_power, multiply

HERE = Path(__file__).parent
GOLDEN = HERE / "golden"
FIXTURES = HERE / "fixtures"

# criterion number -> printed verdict line, filled by test_acceptance.py
ACCEPTANCE_LINES: dict = {}


def _all(flags):
    flags = list(flags)
    return all(flags), len(flags)


# 1 ---------------------------------------------------------------------


def delta_suite():
    W = Window({"z": (-10, 10), "w": (-10, 10)})
    big = Window({"z": (-25, 25), "w": (-25, 25)})
    d = delta(W)
    checks = []
    a = fc_poly({(2, -1): 3, (-3, 0): -1, (0, 0): 5})
    a_ww = fc_poly({(0, 1): 3, (0, -3): -1, (0, 0): 5})
    checks.append(multiply(d, a).agrees_with(multiply(d, a_ww)))
    checks.append(d.swap("z", "w").agrees_with(d))
    for n in range(-10, 11):
        dn = d.derivative("w", n)
        checks.append(dn.derivative("w").agrees_with(-dn.derivative("z")))
        lowered = dn.mul_monomial("z", 1) - dn.mul_monomial("w", 1)
        checks.append(lowered.agrees_with(d.derivative("w", n - 1)))
        split = expand_power(1, -1, -n - 1, "z>w", big) - expand_power(1, -1, -n - 1, "w>z", big)
        checks.append(dn.agrees_with(split))
        if n >= 0:
            checks.append(dn.restrict(lambda p: p["z"] < 0).agrees_with(
                expand_power(1, -1, -n - 1, "z>w", big)))
            checks.append(dn.restrict(lambda p: p["z"] >= 0).agrees_with(
                -expand_power(1, -1, -n - 1, "w>z", big)))
    lhs, rhs = jacobi_for_identity(10)
    checks.append(bool(lhs.terms) and not lhs.disagreements(rhs))
    ok, n = _all(checks)
    return ok, f"{n} windowed identities"


def fc_poly(terms):
    from opecalc.distribution import Distribution
    return Distribution(("z", "w"), {k: Fraction(c) for k, c in terms.items()})


def jacobi_for_identity(bound):
    out = Window({"w": (-bound, bound), "x": (-bound, bound)})
    zw = Window({"z": (-bound, bound), "w": (-bound, bound)})
    lhs = delta(Window({"z": (-bound, bound), "u": (-2 * bound, 2 * bound)}), ("z", "u"))
    lhs = lhs.substitute("u", 1, "w", 1, "x", region="w>x", window=out)
    d = delta(Window({"x": (-bound, bound), "y": (-2 * bound, 2 * bound)}), ("x", "y"))
    r1 = d.substitute("y", 1, "z", -1, "w", region="z>w", window=zw)
    r2 = d.substitute("y", 1, "z", -1, "w", region="w>z", window=zw)
    return lhs, (r1 - r2).with_vars(lhs.vars)


# 2 ---------------------------------------------------------------------


def expansion_suite(seed=0):
    rng = random.Random(seed)
    checks = []
    for n in range(6):
        e = expand_power(1, -1, -n - 1, "z>w", Window({"z": (-21, None), "w": (None, 20)}))
        checks += [e.coeff((-m - 1, m - n)) == oracles.binom(m, n) for m in range(21)]
    hs = [Fraction(rng.randint(-40, 40), rng.choice([1, 2, 3, 4, 5, 7])) for _ in range(50)]

    def win(h):
        return Window({"z": (h - 12, None), "w": (None, 12)})

    for h, g in zip(hs, hs[1:] + hs[:1]):
        prod = multiply(expand_power(1, -1, h, "z>w", win(h)), expand_power(1, -1, g, "z>w", win(g)))
        checks.append(bool(prod.terms) and prod.agrees_with(expand_power(1, -1, h + g, "z>w", win(h + g))))
        dw = expand_power(1, -1, h, "z>w", win(h)).derivative("w")
        checks.append(dw.agrees_with(expand_power(1, -1, h - 1, "z>w", win(h - 1)).scale(-h)))
    W2 = Window({"z": (-30, None), "zbar": (-30, None), "w": (None, 6), "wbar": (None, 6)})
    for _ in range(20):
        h = Fraction(rng.randint(-12, 12), rng.choice([1, 2, 3, 5]))
        hb = h - rng.randint(-4, 4)
        for mu, nu in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
            e = expand_power(mu, nu, (h, hb), "z>w", W2)
            for i, ib in iproduct(range(7), repeat=2):
                sign = 1 if mu == 1 else (-1) ** abs(int(h - hb + i + ib))
                want = oracles.binom(h, i) * oracles.binom(hb, ib) * sign * Fraction(nu) ** (i + ib)
                checks.append(e.coeff((h - i, hb - ib, i, ib)) == want)
            flipped = expand_power(-mu, -nu, (h, hb), "z>w", W2)
            checks.append(flipped.agrees_with(e.scale((-1) ** abs(int(h - hb)))))
    ok, n = _all(checks)
    return ok, f"{n} coefficient comparisons, 50 rational and 20 checked exponents"


# 3 ---------------------------------------------------------------------


def virasoro_lie_triples(count, seed):
    rng = random.Random(seed)

    def elem():
        x = liealg.Element()
        for _ in range(rng.randint(1, 3)):
            x.add_scaled(liealg.vir(rng.randint(-8, 8)), Fraction(rng.randint(-5, 5) or 1, rng.randint(1, 4)))
        if rng.random() < 0.3:
            x.add_scaled(liealg.central("c"), rng.randint(1, 3))
        return x

    return [(elem(), elem(), elem()) for _ in range(count)]


def virasoro_ope_matches(c, cutoff=6):
    """(i) mode brackets, (ii) the OPE and (iii) order <= 4 with the two
    coefficients, all read off V^c(Vir) up to the cutoff."""
    c = Fraction(c)
    V = va.virasoro(c, cutoff)
    L = V.generator_field("L")
    ope = dict(fc.ope_singular(L, L, cutoff))
    one = fc.identity_field(V)
    want = {3: fc.Field(V, 0, 0, lambda m, k: one.act(m, k).scale(c / 2)),
            1: fc.Field(V, 2, 0, lambda m, k: L.act(m, k).scale(2)),
            0: fc.derivative_field(L)}
    ii = set(ope) == set(want) and all(fc.fields_agree(ope[n], want[n], cutoff)[0] for n in want)
    iii = fc.locality_order(L, L, cutoff).order <= 4 and ii
    i_ok = True
    for key in V.basis(cutoff - 2):
        for n, m in iproduct(range(-3, 4), repeat=2):
            if V.weight(key) - n - m > cutoff:
                continue
            # L_n = L_(n+1)
            lhs = fc.commutator(L, L, n + 1, m + 1, key)
            rhs = L.act(n + m + 1, key).scale(n - m)
            if n + m == 0:
                rhs.add_scaled({key: 1}, Fraction(n ** 3 - n, 12) * c)
            i_ok &= lhs == rhs
    return i_ok, ii, iii


def virasoro_suite():
    coc = liealg.check_cocycle(10)
    jac = liealg.check_lie_jacobi(liealg.virasoro_algebra(), virasoro_lie_triples(200, 3))
    eq = {c: virasoro_ope_matches(c) for c in (Fraction(1, 2), Fraction(1), Fraction(26))}
    ok = coc.ok and coc.passed == 21 ** 3 and jac.ok and jac.passed == 200 and all(
        all(v) for v in eq.values())
    return ok, f"cocycle {coc.passed}/{21 ** 3}, Jacobi {jac.passed}/200, OPE at c=1/2,1,26: " + \
        ",".join("ok" if all(v) else "FAIL" for v in eq.values())


# 4 ---------------------------------------------------------------------


def character_suite():
    heis = list(va.heisenberg(1, 6).character(6).values())
    vir = list(va.virasoro(Fraction(1, 2), 6).character(6).values())
    cl = va.clifford1(1, 6).character(6)
    sl2 = list(va.affine_sl2(1, 4).character(4).values())
    checks = [heis == oracles.heisenberg_character(6) == [1, 1, 2, 3, 5, 7, 11],
              vir == oracles.virasoro_character(6) == [1, 0, 1, 1, 2, 2, 4],
              dict(cl) == oracles.fermion_character(6),
              sl2 == oracles.sl2_character(4)]
    return all(checks), f"heis {heis}, vir {vir}, clifford1 {len(cl)} weights, sl2 {sl2}"


# 5 ---------------------------------------------------------------------


def vertex_axiom_reports():
    """Exhaustive sweeps at cutoff 4 and box [-3,3]; affine sl2 is exhaustive at
    cutoff 3 and sampled at cutoff 4; the full cutoff 4 sweep is scripts/run_axiom_suite.py."""
    out = {}
    for name in ("heisenberg", "virasoro", "clifford1"):
        V = va.HOLOMORPHIC_CATALOG[name](cutoff=4) if name != "virasoro" else va.virasoro(Fraction(1, 2), 4)
        out[name] = va.verify_axioms(V, va.SweepConfig(cutoff=4))
    out["poly_comm"] = va.verify_axioms(va.poly_comm(4), va.SweepConfig(cutoff=0))
    sl2 = va.affine_sl2(1, 4)
    out["affine_sl2@3"] = va.verify_axioms(sl2, va.SweepConfig(cutoff=3))
    out["affine_sl2@4 sampled"] = va.verify_axioms(sl2, va.SweepConfig(cutoff=4, sample=400, seed=0))
    return out


def mutated_heisenberg():
    from opecalc.specfile import build, load_spec

    return build(load_spec(FIXTURES / "broken.spec"), 2, validate=False)


def vertex_axiom_suite():
    reps = vertex_axiom_reports()
    mut = va.verify_axioms(mutated_heisenberg(), va.SweepConfig(cutoff=2, index_box=(-2, 2)))
    fails = mut.failures()
    ok = all(r.ok and r.passed > 0 for r in reps.values()) and bool(fails) and bool(fails[0].witness)
    detail = ", ".join(f"{k} {r.passed} pass/{r.failed} fail" for k, r in reps.items())
    return ok, detail + f"; mutation: {len(fails)} failures recorded"


# 6 ---------------------------------------------------------------------


def dong_triples(count_per_algebra=30, seed=0, cutoff=3):
    rng = random.Random(seed)
    algs = [va.heisenberg(1, 4), va.virasoro(Fraction(1, 2), 4), va.clifford1(1, 4), va.affine_sl2(1, 3)]
    rows = []
    for V in algs:
        basis = [k for k in V.basis(2) if k]
        for _ in range(count_per_algebra):
            a, b, c = (rng.choice(basis) for _ in range(3))
            n = rng.randint(-2, 4)
            Ya, Yb, Yc = (V.Y({x: 1}) for x in (a, b, c))

            def N(x, y):
                return fc.locality_order(x, y, cutoff).order

            nab, nbc, nac = N(Ya, Yb), N(Yb, Yc), N(Ya, Yc)
            measured = fc.locality_order(fc.nth_product(Ya, Yb, n), Yc, cutoff).order
            rows.append((V.name_, V.name(a), V.name(b), V.name(c), n, measured,
                         fc.dong_bound(nab, nbc, nac, n)))
    return rows


def dong_suite():
    rows = dong_triples()
    bad = [r for r in rows if r[5] is None or r[5] > r[6]]
    return not bad and len(rows) >= 100, f"{len(rows)} triples, {len(bad)} above the bound"


# 7 ---------------------------------------------------------------------


def sugawara_verdicts(cutoff=4):
    V = va.heisenberg(1, cutoff)
    a = next(iter(V.gen_state("a")))
    aa = V.product({a: 1}, -1, {a: 1})
    normalized = va.conformal_vector_check(V, aa.scale(Fraction(1, 2)), cutoff)
    raw = va.conformal_vector_check(V, aa, cutoff)
    return normalized, raw


def sugawara_suite():
    good, raw = sugawara_verdicts()
    golden = json.loads((GOLDEN / "sugawara.json").read_text())
    frozen = (list(good.as_tuple()) == [golden["normalized"][0], Fraction(golden["normalized"][1]),
                                        golden["normalized"][2]]
              and raw.is_conformal is golden["unnormalized_conformal"])
    ok = good.as_tuple() == (True, 1, True) and not raw.is_conformal and frozen
    return ok, f"(1/2)a_(-1)a -> {good.as_tuple()}, a_(-1)a -> conformal={raw.is_conformal}"


# 8 ---------------------------------------------------------------------


def two_d_suite(sweep=True):
    alg = ope2d.toroidal_tensor(1, 1, (3, 3))
    ak = alg.key("a", "a")
    A = alg.Y({ak: 1})
    loc = ope2d.additive_locality_order(A, A)
    terms = ope2d.reduced_ope(A, A)
    rec = ope2d.reconstruct_check(A, A, terms)
    parts = [loc.order == (2, 2), bool(terms) and terms[0].reduced, rec.ok and rec.passed > 0]
    detail = f"order {loc.order}, reconstruction {rec.passed} modes"
    if sweep:
        rep = ope2d.verify_ope_algebra(alg, ope2d.Sweep2Config(cutoff=(3, 3), index_box=(-2, 2)))
        counts = rep.counts
        need = ("skew_symmetry2", "jacobi2", "additive_duality", "bracket_consistency")
        parts.append(rep.ok and all(counts.get(k, {}).get("pass", 0) > 0 for k in need))
        detail += "; " + ", ".join(f"{k} {counts[k]['pass']}" for k in need) + f", failures {rep.failed}"
    return all(parts), detail


# 9 ---------------------------------------------------------------------


def run_cli(*args, env=None):
    """Run the CLI from the tests directory so fixture paths stay relative."""
    if env is None:
        env = {k: v for k, v in os.environ.items() if k != "OPECALC_THREADS"}
    proc = subprocess.run([sys.executable, "-m", "opecalc.cli", *args], capture_output=True,
                          text=True, env=env, cwd=HERE)
    return proc.returncode, proc.stdout, proc.stderr


def cli_suite():
    checks = {}
    code, out, _ = run_cli("ope", "catalog:virasoro", "L", "L")
    checks["ope golden"] = code == 0 and out == (GOLDEN / "ope_virasoro_LL.txt").read_text()
    code, out, _ = run_cli("character", "catalog:heisenberg", "--cutoff", "6")
    checks["character golden"] = code == 0 and out == (GOLDEN / "character_heisenberg_6.txt").read_text()
    code, out, _ = run_cli("verify", "fixtures/heisenberg.spec", "--cutoff", "2",
                           "--indices=-2..2", "--format", "json")
    checks["verify json golden"] = code == 0 and json.loads(out) == json.loads(
        (GOLDEN / "verify_heisenberg_2.json").read_text())
    checks["exit 1 on mutation"] = run_cli("verify", "fixtures/broken.spec", "--cutoff", "2",
                                           "--indices=-2..2")[0] == 1
    checks["exit 2 on malformed"] = run_cli("verify", "fixtures/malformed.spec")[0] == 2
    bad = [k for k, v in checks.items() if not v]
    return not bad, "all golden files and exit codes match" if not bad else f"mismatch: {bad}"


CRITERIA = {
    1: ("delta calculus", delta_suite),
    2: ("expansions", expansion_suite),
    3: ("Virasoro", virasoro_suite),
    4: ("characters", character_suite),
    5: ("vertex axioms", vertex_axiom_suite),
    6: ("Dong bound", dong_suite),
    7: ("Sugawara vector", sugawara_suite),
    8: ("two-variable OPE algebra", two_d_suite),
    9: ("command line", cli_suite),
}
