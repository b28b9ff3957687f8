"""Exhaustive or sampled axiom sweeps over catalog algebras.

    python scripts/run_axiom_suite.py heisenberg --cutoff 4
    python scripts/run_axiom_suite.py affine_sl2 --cutoff 4 --sample 400
    python scripts/run_axiom_suite.py fermion_tensor --cutoff 3

Prints the report and a wall-clock time; ``--json PATH`` also writes it out.
"""
from __future__ import annotations

import argparse
import time
from dataclasses import dataclass
from fractions import Fraction

from opecalc import ope2d
from opecalc import vertexalg as va


@dataclass
class RunConfig:
    algebra: str
    cutoff: str = "4"
    box: int = 3
    sample: int | None = None
    seed: int = 0
    c: str = "1/2"


def run(cfg: RunConfig):
    if cfg.algebra in ope2d.TENSOR_CATALOG:
        n = int(cfg.cutoff)
        alg = ope2d.TENSOR_CATALOG[cfg.algebra](cutoff=(n, n))
        sweep = ope2d.Sweep2Config(cutoff=(n, n), index_box=(-cfg.box, cfg.box),
                                   sample=cfg.sample, seed=cfg.seed)
        return ope2d.verify_ope_algebra(alg, sweep)
    cut = Fraction(cfg.cutoff)
    if cfg.algebra == "virasoro":
        V = va.virasoro(Fraction(cfg.c), cut)
    elif cfg.algebra == "poly_comm":
        V, cut = va.poly_comm(4), Fraction(0)
    else:
        V = va.HOLOMORPHIC_CATALOG[cfg.algebra](cutoff=cut)
    sweep = va.SweepConfig(cutoff=cut, index_box=(-cfg.box, cfg.box), sample=cfg.sample, seed=cfg.seed)
    return va.verify_axioms(V, sweep)


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("algebra")
    p.add_argument("--cutoff", default="4")
    p.add_argument("--box", type=int, default=3, help="mode indices run over [-box, box]")
    p.add_argument("--sample", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--c", default="1/2", help="central charge for virasoro")
    p.add_argument("--json", default=None)
    a = p.parse_args()
    cfg = RunConfig(a.algebra, a.cutoff, a.box, a.sample, a.seed, a.c)
    t0 = time.time()
    rep = run(cfg)
    print(rep.to_text())
    print(f"# {cfg} finished in {time.time() - t0:.1f}s")
    if a.json:
        with open(a.json, "w") as fh:
            fh.write(rep.to_json())
    raise SystemExit(0 if rep.ok else 1)


if __name__ == "__main__":
    main()
