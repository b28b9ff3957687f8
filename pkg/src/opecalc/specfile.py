"""Text format for algebra specifications.

A spec is a line-oriented file of ``[section]`` headers and ``key = value``
lines; ``#`` starts a comment.  Example::

    [algebra]
    name = vir
    kind = vertex
    level = 1
    cutoff = 4

    [generator.L]
    parity = even
    weight = 2

    [ope.L.L]
    0 = T^1(L)
    1 = 2*L
    3 = 1/4*k

An ``[ope.s.t]`` line ``n = expr`` gives the product s_(n)t for n >= 0.
Expressions follow

    expr := term ('+' term)*
    term := rational '*'? atom
    atom := 'k' | 'T^' int '(' gen ')' | gen

with an optional sign on the rational.  ``catalog = NAME`` in ``[algebra]``
refers to a built-in algebra instead of listing generators.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .numcore import Parity, exact, render_scalar

KINDS = ("vertex", "ope2d-tensor", "commutative")


class SpecError(ValueError):
    """Malformed or inconsistent spec text."""


@dataclass
class GeneratorSpec:
    name: str
    parity: int
    weight: Fraction


@dataclass
class AlgebraSpec:
    name: str = "algebra"
    kind: str = "vertex"
    level: Fraction = Fraction(1)
    level_bar: Fraction | None = None
    cutoff: Fraction | None = None
    catalog: str | None = None
    params: dict = field(default_factory=dict)
    generators: list = field(default_factory=list)
    opes: dict = field(default_factory=dict)  # (s, t, n) -> {(j, gen or "k"): coeff}

    def generator_names(self) -> list:
        return [g.name for g in self.generators]


_NAME = r"[A-Za-z_][A-Za-z0-9_]*"
_RATIONAL = r"[+-]?\d+(?:/\d+)?"
_TERM = re.compile(rf"^(?:(?P<coef>{_RATIONAL})\s*\*?\s*)?(?:T\^(?P<j>\d+)\s*\(\s*(?P<tg>{_NAME})\s*\)|(?P<g>{_NAME}))$")


def parse_expr(text: str, generators=None) -> dict:
    """Parse a linear expression into ``{(j, gen): coeff}``; ``k`` is the central element."""
    text = text.strip()
    if text == "0":
        return {}
    out: dict = {}
    # split on '+' at top level; a leading sign belongs to the coefficient
    for raw in re.split(r"\+(?![^()]*\))", text):
        part = raw.strip()
        if not part:
            raise SpecError(f"empty term in {text!r}")
        m = _TERM.match(part)
        if not m:
            raise SpecError(f"cannot parse term {part!r}")
        coef = _scalar(m.group("coef"), "coefficient") if m.group("coef") else Fraction(1)
        if m.group("tg"):
            j, g = int(m.group("j")), m.group("tg")
        else:
            j, g = 0, m.group("g")
        if g == "T":
            raise SpecError(f"T needs the form T^j(gen) in {part!r}")
        if g == "k" and j:
            raise SpecError("T annihilates k")
        if generators is not None and g != "k" and g not in generators:
            raise SpecError(f"unknown generator {g!r} in {part!r}")
        key = (j, g)
        out[key] = out.get(key, 0) + coef
    return {k: exact(v) for k, v in out.items() if v}


def render_expr(elem: dict) -> str:
    if not elem:
        return "0"
    parts = []
    for (j, g), c in sorted(elem.items(), key=lambda kv: (kv[0][1] != "k", kv[0][1], kv[0][0])):
        atom = g if j == 0 else f"T^{j}({g})"
        parts.append(atom if c == 1 else f"{render_scalar(c)}*{atom}")
    return " + ".join(parts)


def _scalar(text: str, what: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise SpecError(f"bad number for {what}: {text!r}") from e


def parse_spec(text: str) -> AlgebraSpec:
    spec = AlgebraSpec()
    section = None
    gens: dict = {}
    raw_opes: list = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise SpecError(f"line {lineno}: unterminated section header")
            section = line[1:-1].strip()
            parts = section.split(".")
            if parts[0] == "generator" and len(parts) == 2:
                if parts[1] in gens:
                    raise SpecError(f"line {lineno}: duplicate generator {parts[1]!r}")
                gens[parts[1]] = {"parity": 0, "weight": None}
            elif parts[0] == "ope" and len(parts) == 3:
                pass
            elif section != "algebra":
                raise SpecError(f"line {lineno}: unknown section [{section}]")
            continue
        if "=" not in line:
            raise SpecError(f"line {lineno}: expected key = value")
        key, value = (x.strip() for x in line.split("=", 1))
        if section is None:
            raise SpecError(f"line {lineno}: entry outside any section")
        parts = section.split(".")
        if section == "algebra":
            if key == "name":
                spec.name = value
            elif key == "kind":
                if value not in KINDS:
                    raise SpecError(f"line {lineno}: kind must be one of {KINDS}")
                spec.kind = value
            elif key == "level":
                spec.level = _scalar(value, "level")
            elif key == "level_bar":
                spec.level_bar = _scalar(value, "level_bar")
            elif key == "cutoff":
                spec.cutoff = _scalar(value, "cutoff")
            elif key == "catalog":
                spec.catalog = value
            else:
                spec.params[key] = value
        elif parts[0] == "generator":
            g = gens[parts[1]]
            if key == "parity":
                try:
                    g["parity"] = int(Parity.parse(value))
                except (ValueError, KeyError) as e:
                    raise SpecError(f"line {lineno}: bad parity {value!r}") from e
            elif key == "weight":
                g["weight"] = _scalar(value, "weight")
            else:
                raise SpecError(f"line {lineno}: unknown generator field {key!r}")
        else:
            try:
                n = int(key)
            except ValueError as e:
                raise SpecError(f"line {lineno}: OPE key must be a product index, got {key!r}") from e
            if n < 0:
                raise SpecError(f"line {lineno}: OPE product index must be >= 0")
            raw_opes.append((lineno, parts[1], parts[2], n, value))
    for name, g in gens.items():
        if g["weight"] is None:
            raise SpecError(f"generator {name!r} has no weight")
        spec.generators.append(GeneratorSpec(name, g["parity"], g["weight"]))
    names = set(gens)
    for lineno, s, t, n, value in raw_opes:
        for x in (s, t):
            if x not in names:
                raise SpecError(f"line {lineno}: OPE names unknown generator {x!r}")
        try:
            elem = parse_expr(value, names)
        except SpecError as e:
            raise SpecError(f"line {lineno}: {e}") from e
        spec.opes[(s, t, n)] = elem
    if spec.catalog is None and spec.kind == "vertex" and not spec.generators:
        raise SpecError("a vertex spec needs generators or a catalog reference")
    return spec


def render_spec(spec: AlgebraSpec) -> str:
    lines = ["[algebra]", f"name = {spec.name}", f"kind = {spec.kind}",
             f"level = {render_scalar(spec.level)}"]
    if spec.level_bar is not None:
        lines.append(f"level_bar = {render_scalar(spec.level_bar)}")
    if spec.cutoff is not None:
        lines.append(f"cutoff = {render_scalar(spec.cutoff)}")
    if spec.catalog is not None:
        lines.append(f"catalog = {spec.catalog}")
    for k, v in sorted(spec.params.items()):
        lines.append(f"{k} = {v}")
    for g in spec.generators:
        lines += ["", f"[generator.{g.name}]", f"parity = {'odd' if g.parity else 'even'}",
                  f"weight = {render_scalar(g.weight)}"]
    order = {g.name: i for i, g in enumerate(spec.generators)}
    by_pair: dict = {}
    for (s, t, n), elem in spec.opes.items():
        by_pair.setdefault((s, t), []).append((n, elem))
    for (s, t) in sorted(by_pair, key=lambda p: (order.get(p[0], 0), order.get(p[1], 0))):
        lines += ["", f"[ope.{s}.{t}]"]
        for n, elem in sorted(by_pair[(s, t)]):
            lines.append(f"{n} = {render_expr(elem)}")
    return "\n".join(lines) + "\n"


def load_spec(path: str | Path) -> AlgebraSpec:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise SpecError(f"cannot read {path}: {e.strerror}") from e
    return parse_spec(text)


def catalog_spec(name: str) -> AlgebraSpec:
    from .ope2d import TENSOR_CATALOG
    from .vertexalg import HOLOMORPHIC_CATALOG

    if name in TENSOR_CATALOG:
        return AlgebraSpec(name=name, kind="ope2d-tensor", catalog=name)
    if name == "poly_comm":
        return AlgebraSpec(name=name, kind="commutative", catalog=name)
    if name in HOLOMORPHIC_CATALOG:
        return AlgebraSpec(name=name, kind="vertex", catalog=name)
    raise SpecError(f"no catalog algebra named {name!r}")


def resolve(ref: str) -> AlgebraSpec:
    """``catalog:NAME`` or a path to a spec file."""
    if ref.startswith("catalog:"):
        return catalog_spec(ref.split(":", 1)[1])
    return load_spec(ref)


def build(spec: AlgebraSpec, cutoff=None, validate: bool = True):
    """Instantiate the algebra a spec describes.

    With ``validate=False`` a vertex spec whose OPE data violates the
    conformal-algebra axioms is still built, so a sweep can report witnesses.
    """
    from . import ope2d, vertexalg

    cut = cutoff if cutoff is not None else spec.cutoff
    if spec.kind == "ope2d-tensor":
        name = spec.catalog or spec.params.get("tensor", "toroidal_tensor")
        c2 = (cut, cut) if cut is not None else (3, 3)
        if name == "toroidal_tensor":
            lb = spec.level_bar if spec.level_bar is not None else spec.level
            return ope2d.toroidal_tensor(spec.level, lb, c2)
        if name == "fermion_tensor":
            return ope2d.fermion_tensor(c2)
        raise SpecError(f"unknown tensor algebra {name!r}")
    if spec.kind == "commutative":
        deg = int(spec.params.get("degree", 4))
        return vertexalg.poly_comm(deg)
    cut = 4 if cut is None else cut
    if spec.catalog:
        maker = vertexalg.HOLOMORPHIC_CATALOG.get(spec.catalog)
        if maker is None:
            raise SpecError(f"no catalog algebra named {spec.catalog!r}")
        if spec.catalog == "virasoro":
            c = Fraction(spec.params.get("c", "1/2"))
            return maker(c, cut)
        if spec.catalog == "poly_comm":
            return maker()
        return maker(spec.level, cut)
    gens = [vertexalg.Generator(g.name, g.parity, g.weight) for g in spec.generators]
    try:
        R = vertexalg.ConformalAlgebra(gens, spec.opes, name=spec.name, validate=validate)
    except vertexalg.ConformalAlgebraError:
        raise
    except ValueError as e:
        raise SpecError(str(e)) from e
    return vertexalg.VertexAlgebra(R, spec.level, cut, name=spec.name)
