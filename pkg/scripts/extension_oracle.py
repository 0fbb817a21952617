"""
Compare 2^dim H^2 with a brute-force count of abelian extension classes over F2.

Runs every algebra and representation with dim P = dim M = 1 (plus optional
random ones with dim P = 2) through each requested variety and prints one row
per case. Mismatches are marked with '!'.
"""

import argparse
import itertools
from dataclasses import dataclass

from npb.actions import Representation, check_action, enumerate_extensions
from npb.algebra import BiAlgebra, Variety, classify
from npb.cohomology import build_complex, cohomology_dims, restricted_h2
from npb.exactlin import FieldSpec
from npb.samples import random_instance

F2 = FieldSpec.parse("F2")
NP = {Variety.NPL, Variety.NPR, Variety.NPLR}


@dataclass
class Config:
    varieties: tuple = ("npl", "npr", "nplr", "awbl", "awbr", "awblr")
    random_dim2: int = 0


def micro_instances():
    for d, b in itertools.product(range(2), repeat=2):
        P = BiAlgebra.make(F2, [[[d]]], [[[b]]])
        for acts in itertools.product(range(2), repeat=4):
            yield Representation.build(P, 1, *[[[[a]]] for a in acts])


def h2(v, R):
    if v in NP:
        return restricted_h2(v, R)
    return cohomology_dims(build_complex(v, R, 2), 2)[2]


def main(cfg: Config):
    varieties = [Variety.parse(v) for v in cfg.varieties]
    cases = list(micro_instances())
    for v in varieties:
        cases += [random_instance(v, "F2", s, dim_P=2, dim_M=1) for s in range(cfg.random_dim2)]
    mismatches = 0
    print("variety  dot br | dotL dotR brL brR | 2^h  classes")
    for R in cases:
        tags = classify(R.algebra)
        for v in varieties:
            if v not in tags or not check_action(v, R):
                continue
            h = h2(v, R)
            ext = enumerate_extensions(R.algebra, R, v)["classes"]
            bad = 2 ** h != ext
            mismatches += bad
            if R.algebra.dim == 1:
                acts = " ".join(str(getattr(R, k)[0].to_dense()[0][0]) for k in ("dotL", "dotR", "brL", "brR"))
                shape = f"{R.algebra.dot[0][0][0]}   {R.algebra.bracket[0][0][0]}  | {acts:<17}"
            else:
                shape = f"dim P = {R.algebra.dim}".ljust(26)
            print(f"{v.value:<8} {shape}| {2 ** h:<4} {ext}{'  !' if bad else ''}")
    print(f"{mismatches} mismatches")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--variety", action="append")
    ap.add_argument("--random-dim2", type=int, default=0)
    a = ap.parse_args()
    main(Config(tuple(a.variety) if a.variety else Config.varieties, a.random_dim2))
