"""Cohomology dimensions of random instances for each variety."""

import argparse
from dataclasses import dataclass

from npb.cohomology import VARIETY_KEY, cohomology_table
from npb.samples import SampleConfig, random_instance


@dataclass
class Config:
    seeds: int = 4
    max_degree: int = 4
    field: str = "Q"
    max_dim_P: int = 3
    max_dim_M: int = 2


def main(cfg: Config):
    sample = SampleConfig(max_dim_P=cfg.max_dim_P, max_dim_M=cfg.max_dim_M)
    print(f"{'variety':<7} seed  P M  " + " ".join(f"H^{n:<3}" for n in range(cfg.max_degree + 1))
          + "  restricted H^2")
    for v in VARIETY_KEY:
        for seed in range(cfg.seeds):
            R = random_instance(v, cfg.field, seed, sample)
            rows = cohomology_table(v, R, cfg.max_degree)
            head = rows[0]
            dims = " ".join(f"{r['h_dim']:<5}" for r in rows[1:])
            print(f"{v.value:<7} {seed:<5} {head['dim_P']} {head['dim_M']}  {dims}  "
                  f"{head.get('restricted_h2', '-')}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=4)
    ap.add_argument("--max-degree", type=int, default=4)
    ap.add_argument("--field", default="Q")
    a = ap.parse_args()
    main(Config(a.seeds, a.max_degree, a.field))
