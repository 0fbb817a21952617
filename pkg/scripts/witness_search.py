"""
Exhaustive search over F2 for square-zero derivation brackets that separate NPl from NPr.

Every associative multiplication table in dimensions 1..max_dim is enumerated
by backtracking, reduced to one table per GL_n(F2) orbit, and every
square-zero derivation D of each representative is tried with both bracket
sides [a,b] = D(a)b - bD(a) and [a,b] = aD(b) - D(b)a. Afterwards the
2x2 matrix algebra is searched through its inner derivations.
"""

import argparse
import functools
import itertools
import time
from dataclasses import dataclass

from npb.algebra import BiAlgebra, Variety, classify, derivation_bracket, is_square_zero_derivation
from npb.exactlin import FieldSpec, Matrix
from npb.samples import search_derivation_witness

F2 = FieldSpec.parse("F2")


@dataclass
class Config:
    max_dim: int = 3
    matrices: bool = True


def _mul(tab, u, v, n):
    """Product of bit vectors u, v in the table tab (rows of bit masks)."""
    r = 0
    for i in range(n):
        if u >> i & 1:
            for j in range(n):
                if v >> j & 1:
                    r ^= tab[i * n + j]
    return r


def associative_tables(n):
    tab = [None] * (n * n)
    found = []

    def consistent():
        for i, j, k in itertools.product(range(n), repeat=3):
            a, b = tab[i * n + j], tab[j * n + k]
            if a is None or b is None:
                continue
            if any(a >> t & 1 and tab[t * n + k] is None for t in range(n)):
                continue
            if any(b >> t & 1 and tab[i * n + t] is None for t in range(n)):
                continue
            left = right = 0
            for t in range(n):
                if a >> t & 1:
                    left ^= tab[t * n + k]
                if b >> t & 1:
                    right ^= tab[i * n + t]
            if left != right:
                return False
        return True

    def fill(pos):
        if pos == n * n:
            found.append(tuple(tab))
            return
        for v in range(1 << n):
            tab[pos] = v
            if consistent():
                fill(pos + 1)
        tab[pos] = None

    fill(0)
    return found


def orbit_representatives(n):
    tables = associative_tables(n)
    bases = []
    for cols in itertools.product(range(1, 1 << n), repeat=n):
        span = {0}
        for x in cols:
            span |= {s ^ x for s in span}
        if len(span) == 1 << n:
            bases.append(cols)

    def transport(t, G):
        apply = lambda v: functools.reduce(lambda a, i: a ^ G[i] if v >> i & 1 else a, range(n), 0)
        inv = {apply(v): v for v in range(1 << n)}
        return tuple(inv[_mul(t, G[i], G[j], n)] for i in range(n) for j in range(n))

    seen, reps = set(), []
    for t in tables:
        if t in seen:
            continue
        orbit = {transport(t, G) for G in bases}
        seen |= orbit
        reps.append(min(orbit))
    return len(tables), reps


def main(cfg: Config):
    t0 = time.time()
    for n in range(1, cfg.max_dim + 1):
        total, reps = orbit_representatives(n)
        hits, square_zero = {"left": [], "right": []}, 0
        zero = [[[0] * n for _ in range(n)] for _ in range(n)]
        for t in reps:
            dot = [[[(t[i * n + j] >> k) & 1 for k in range(n)] for j in range(n)] for i in range(n)]
            A = BiAlgebra.make(F2, dot, zero)
            for e in itertools.product(range(2), repeat=n * n):
                D = Matrix.from_dense(F2, [e[r * n:(r + 1) * n] for r in range(n)], n)
                if not is_square_zero_derivation(A, D):
                    continue
                square_zero += 1
                for side in hits:
                    tags = classify(derivation_bracket(A, D, side))
                    if (Variety.NPL in tags) != (Variety.NPR in tags):
                        hits[side].append((t, e))
        print(f"dim {n}: {total} associative tables, {len(reps)} classes, "
              f"{square_zero} square-zero derivations, separating brackets "
              f"left {len(hits['left'])} right {len(hits['right'])}  ({time.time() - t0:.1f}s)",
              flush=True)
    if cfg.matrices:
        for side, want, avoid in (("left", "npl", "npr"), ("right", "npr", "npl")):
            w = search_derivation_witness("F2", side, True, [want], [avoid], max_dim=4)
            if w is None:
                print(f"{side}: no witness up to dimension 4")
                continue
            A, D, B = w
            print(f"{side}: dim {A.dim} witness, D = {D.to_dense()}, "
                  f"tags {sorted(v.value for v in classify(B))}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-dim", type=int, default=3)
    ap.add_argument("--no-matrices", action="store_true")
    a = ap.parse_args()
    main(Config(a.max_dim, not a.no_matrices))
