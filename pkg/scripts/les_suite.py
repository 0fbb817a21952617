"""Run every long exact sequence on random instances and print one line per run."""

import argparse
import time
from dataclasses import dataclass

from npb.cohomology import CochainContext
from npb.lescheck import LES, SES, verify_les
from npb.samples import SampleConfig, random_instance


@dataclass
class Config:
    seeds: int = 5
    max_degree: int = 5
    max_dim_P: int = 2
    max_dim_M: int = 2
    fields: tuple = ("Q", "F2")


def main(cfg: Config):
    sample = SampleConfig(max_dim_P=cfg.max_dim_P, max_dim_M=cfg.max_dim_M)
    by_variety = {}
    for tag, ses in LES.items():
        by_variety.setdefault(SES[ses].variety, []).append(tag)
    failures = 0
    for v, tags in by_variety.items():
        for seed in range(cfg.seeds):
            field = cfg.fields[seed % len(cfg.fields)]
            R = random_instance(v, field, seed, sample)
            ctx = CochainContext(R)
            for tag in tags:
                t0 = time.time()
                rep = verify_les(tag, R, cfg.max_degree, ctx)
                failures += not rep.exact
                dims = " ".join(f"{k}{list(d.values())}" for k, d in rep.dims.items())
                print(f"{tag:<3} {v.value:<6} {field:<3} seed {seed:<3} P{R.algebra.dim} "
                      f"M{R.module_dim}  {'exact' if rep.exact else 'NOT EXACT'}  {dims}  "
                      f"{time.time() - t0:.1f}s", flush=True)
    print(f"{failures} failures")
    return failures


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--max-degree", type=int, default=5)
    a = ap.parse_args()
    raise SystemExit(1 if main(Config(seeds=a.seeds, max_degree=a.max_degree)) else 0)
