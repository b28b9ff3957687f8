"""Command-line front end: ``opecalc verify|ope|character|catalog``.

Exit codes: 0 when every check passes, 1 when any check fails, 2 for spec,
argument or input errors.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

from . import ope2d, vertexalg
from .fieldcalc import Vector, pole_order
from .numcore import render_scalar
from .report import FAIL, CheckRecord, Report
from .specfile import SpecError, build, resolve

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2

DEFAULT_CUTOFF = 4
DEFAULT_BOX = (-3, 3)
DEFAULT_CUTOFF_2D = 3
DEFAULT_BOX_2D = (-2, 2)

CATALOG = [
    ("heisenberg", "vertex", "free boson, a(z)a(w) ~ k/(z-w)^2"),
    ("virasoro", "vertex", "Virasoro at c = 1/2 (set c in a spec)"),
    ("clifford1", "vertex", "one free fermion of weight 1/2"),
    ("affine_sl2", "vertex", "affine sl2 with pairing (e,f) = 1, (h,h) = 2"),
    ("toroidal_tensor", "ope2d-tensor", "Heisenberg (x) anti-Heisenberg"),
    ("fermion_tensor", "ope2d-tensor", "free fermion (x) anti-free fermion"),
    ("poly_comm", "commutative", "K[x] with T = d/dx, weight of x is -1"),
]


class UsageError(ValueError):
    pass


def threads() -> int:
    raw = os.environ.get("OPECALC_THREADS", "")
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError as e:
        raise UsageError(f"OPECALC_THREADS must be a positive integer, got {raw!r}") from e
    if n < 1:
        raise UsageError("OPECALC_THREADS must be a positive integer")
    return n


def parse_indices(text: str) -> tuple:
    try:
        lo, hi = text.split("..")
        lo, hi = int(lo), int(hi)
    except ValueError as e:
        raise UsageError(f"--indices expects a..b, got {text!r}") from e
    if lo > hi:
        raise UsageError("--indices: empty range")
    return lo, hi


# ---------------------------------------------------------------------------
# verify


def _verify_vertex(spec, args) -> Report:
    cutoff = Fraction(args.cutoff) if args.cutoff is not None else Fraction(spec.cutoff or DEFAULT_CUTOFF)
    box = parse_indices(args.indices) if args.indices else DEFAULT_BOX
    V = build(spec, cutoff, validate=False)
    cfg = vertexalg.SweepConfig(cutoff=cutoff, index_box=box, sample=args.sample, seed=args.seed)
    pre = Report("conformal algebra axioms", cutoff, list(box))
    R = getattr(V, "R", None)
    if R is not None:
        failures = R.axiom_failures()
        for kind, wit in failures:
            pre.add(CheckRecord("conformal_" + kind.replace("-", "_").replace(" ", "_"),
                                {"at": repr(wit)}, FAIL, repr(wit)))
        if not failures:
            pre.tally("conformal_axioms", "pass")
    rep = vertexalg.verify_axioms(V, cfg)
    rep.merge(pre)
    return rep


def _verify_tensor(spec, args) -> Report:
    c = int(args.cutoff) if args.cutoff is not None else int(spec.cutoff or DEFAULT_CUTOFF_2D)
    box = parse_indices(args.indices) if args.indices else DEFAULT_BOX_2D
    alg = build(spec, c)
    if args.sample is None:
        cfg = ope2d.Sweep2Config(cutoff=(c, c), index_box=box, state_cutoff=(1, 1))
    else:
        cfg = ope2d.Sweep2Config(cutoff=(c, c), index_box=box, sample=args.sample, seed=args.seed)
    rep = ope2d.verify_ope_algebra(alg, cfg)
    rep.meta["state_cutoff"] = list(cfg.state_cutoff or cfg.cutoff)
    return rep


def cmd_verify(args) -> int:
    spec = resolve(args.spec)
    t = threads()
    if spec.kind == "ope2d-tensor":
        rep = _verify_tensor(spec, args)
    else:
        rep = _verify_vertex(spec, args)
    rep.meta["threads"] = t
    rep.meta["spec"] = args.spec
    rep.title = f"verify {spec.name}"
    _emit(rep.to_dict() if args.format == "json" else rep.to_text(), args.format)
    return EXIT_OK if rep.ok else EXIT_FAIL


def _emit(payload, fmt):
    if fmt == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(payload)


# ---------------------------------------------------------------------------
# ope


def _coef(c) -> str:
    c = Fraction(c)
    if c == 1:
        return ""
    if c.denominator == 1:
        return str(c.numerator)
    return f"({render_scalar(c)})"


def field_terms(V, vec) -> list:
    """Split a state into (coefficient, field text) pairs in terms of generator fields."""
    vac = next(iter(V.vacuum()))
    level = Fraction(getattr(V, "level", 1) or 1)
    out = []
    for key in sorted(vec, key=lambda k: V.name(k)):
        c = Fraction(vec[key])
        if key == vac:
            out.append((c / level, "k"))
            continue
        names = getattr(getattr(V, "R", None), "generators", None)
        if names is not None and len(key) == 1:
            m, g = key[0]
            # s_(-m) 1 = T^(m-1) s / (m-1)!
            j = m - 1
            c = c * math.factorial(j)
            d = "" if j == 0 else ("∂" if j == 1 else f"∂^{j}")
            out.append((c, f"{d}{names[g].name}(w)"))
        else:
            out.append((c, f":{V.name(key)}:(w)"))
    return out


def render_ope(V, a_key, b_key) -> str:
    """Singular part of a(z)b(w) as sum c(w)/(z-w)^p, or ``regular``."""
    po = pole_order(V, a_key, b_key)
    parts = []
    for n in range(po - 1, -1, -1):
        vec = V.state_product(a_key, n, b_key)
        if not vec:
            continue
        pole = "(z-w)" if n == 0 else f"(z-w)^{n + 1}"
        for c, f in field_terms(V, vec):
            parts.append((c, f"{_coef(abs(c))}{f}/{pole}"))
    if not parts:
        return "regular"
    text = ("-" if parts[0][0] < 0 else "") + parts[0][1]
    for c, t in parts[1:]:
        text += (" - " if c < 0 else " + ") + t
    return text


def _gen_key(V, name):
    if name in ("1", "vacuum"):
        return next(iter(V.vacuum()))
    try:
        return next(iter(V.gen_state(name)))
    except (ValueError, KeyError, AttributeError) as e:
        raise UsageError(f"unknown generator {name!r}") from e


def cmd_ope(args) -> int:
    spec = resolve(args.spec)
    cutoff = args.cutoff
    if spec.kind == "commutative":
        print("regular")
        return EXIT_OK
    if spec.kind == "ope2d-tensor":
        alg = build(spec, int(cutoff) if cutoff is not None else None)
        keys = []
        for g in (args.a, args.b):
            left, _, right = g.partition("|")
            keys.append(alg.key(None if left in ("", "1") else left, None if right in ("", "1") else right))
        terms = [(p, lab) for p, lab in ope2d.tensor_ope_terms(alg, *keys) if p[0] > 0 or p[1] > 0]
        if not terms:
            print("regular")
        else:
            out = []
            for (h, hb), lab in terms:
                den = []
                if h:
                    den.append("(z-w)" if h == 1 else f"(z-w)^{h}")
                if hb:
                    den.append("(zbar-wbar)" if hb == 1 else f"(zbar-wbar)^{hb}")
                out.append(f"{lab}/{''.join(den)}")
            print(" + ".join(out))
        return EXIT_OK
    V = build(spec, cutoff)
    print(render_ope(V, _gen_key(V, args.a), _gen_key(V, args.b)))
    return EXIT_OK


# ---------------------------------------------------------------------------
# character and catalog


def _wkey(w) -> str:
    if isinstance(w, tuple):
        return ",".join(render_scalar(x) for x in w)
    return render_scalar(w)


def cmd_character(args) -> int:
    spec = resolve(args.spec)
    if spec.kind == "ope2d-tensor":
        c = int(args.cutoff) if args.cutoff is not None else int(spec.cutoff or DEFAULT_CUTOFF_2D)
        alg = build(spec, c)
        ch = alg.character()
        cutoff = [c, c]
    else:
        cutoff = Fraction(args.cutoff) if args.cutoff is not None else Fraction(spec.cutoff or DEFAULT_CUTOFF)
        V = build(spec, cutoff)
        ch = V.character(cutoff)
    name = spec.name
    if args.format == "json":
        _emit({"algebra": name, "cutoff": cutoff if isinstance(cutoff, list) else render_scalar(cutoff),
               "character": {_wkey(w): d for w, d in ch.items()}}, "json")
    else:
        cut = ",".join(map(str, cutoff)) if isinstance(cutoff, list) else render_scalar(cutoff)
        lines = [f"# character of {name} up to weight {cut}", "weight dim"]
        lines += [f"{_wkey(w)} {d}" for w, d in ch.items()]
        lines.append(",".join(str(d) for d in ch.values()))
        print("\n".join(lines))
    return EXIT_OK


def cmd_catalog(args) -> int:
    if args.format == "json":
        _emit([{"name": n, "kind": k, "description": d} for n, k, d in CATALOG], "json")
    else:
        for n, k, d in CATALOG:
            print(f"{n:16s} {k:13s} {d}")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="opecalc", description="Exact OPE and vertex-algebra calculator.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, spec=True):
        if spec:
            sp.add_argument("spec", help="spec file or catalog:NAME")
        sp.add_argument("--cutoff", default=None, help="weight cutoff")
        sp.add_argument("--format", choices=("text", "json"), default="text")

    v = sub.add_parser("verify", help="run the axiom suite")
    common(v)
    v.add_argument("--indices", default=None, help="mode index box a..b")
    v.add_argument("--seed", type=int, default=0, help="tuple-sampling seed")
    v.add_argument("--sample", type=int, default=None, help="sample this many state triples")
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("ope", help="singular OPE of two generators")
    common(o)
    o.add_argument("a")
    o.add_argument("b")
    o.set_defaults(func=cmd_ope)

    c = sub.add_parser("character", help="graded dimensions up to the cutoff")
    common(c)
    c.set_defaults(func=cmd_character)

    k = sub.add_parser("catalog", help="list built-in algebras")
    k.add_argument("--format", choices=("text", "json"), default="text")
    k.set_defaults(func=cmd_catalog)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_OK
    try:
        return args.func(args)
    except (SpecError, UsageError, vertexalg.ConformalAlgebraError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
