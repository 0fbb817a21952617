"""Free-algebra basis counts and the freeness of the underlying associative / Leibniz algebras."""

import argparse
from dataclasses import dataclass

from npb.freealg import dependence_witnesses, enumerate_basis, underlying_free_basis_report

SIX = ("npl", "npr", "nplr", "awbl", "awbr", "awblr")


@dataclass
class Config:
    max_degree: int = 5
    generators: tuple = ("x",)
    underlying_degree: int = 4


def main(cfg: Config):
    gens = list(cfg.generators)
    print(f"basis counts on {','.join(gens)}, degrees 1..{cfg.max_degree}")
    for v in SIX:
        counts = [len(enumerate_basis(v, gens, n)) for n in range(1, cfg.max_degree + 1)]
        print(f"  {v:<6} {counts}")
    print(f"underlying algebras up to degree {cfg.underlying_degree}")
    for v in ("npl", "npr", "nplr"):
        for kind in ("assoc", "leibniz"):
            rep = underlying_free_basis_report(v, gens, kind, cfg.underlying_degree)
            print(f"  {v:<5} {kind:<8} {'free' if rep['free'] else 'not free'}")
            for r in rep["rows"]:
                if "dependence" in r:
                    print(f"      md {r['multidegree']}: {r['dependence']}")
    for w in dependence_witnesses("nplr"):
        print(f"  ({w['identity']}) {w['witness']}  vanishes: {w['relation_vanishes']}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-degree", type=int, default=5)
    ap.add_argument("--generators", default="x")
    ap.add_argument("--underlying-degree", type=int, default=4)
    a = ap.parse_args()
    main(Config(a.max_degree, tuple(a.generators.split(",")), a.underlying_degree))
