"""
Random algebras and representations for the property suites.

Candidates come from randomized constructions (small associative algebras
with commutator or derivation brackets, two-step nilpotent structures,
Leibniz algebras with zero dot, plain sparse structure constants), are moved
by a random change of basis and are kept only when ``classify`` puts them in
the requested variety. Everything is driven by one ``random.Random``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .actions import Representation, check_action, derivation_system
from .algebra import (BiAlgebra, Variety, check_identity, classify, commutator_bracket,
                      derivation_bracket, ideal_closure, is_square_zero_derivation)
from .errors import GuardExceeded
from .exactlin import FieldSpec, Matrix, kernel, rank, solve
from .terms import BR, DOT


@dataclass(frozen=True)
class SampleConfig:
    max_dim_P: int = 3
    max_dim_M: int = 2
    min_dim_P: int = 1
    min_dim_M: int = 1
    density: float = 0.3
    tries: int = 400


def _coef(F: FieldSpec, rng: random.Random, zero_ok=True):
    if F.p:
        lo = 0 if zero_ok else 1
        return rng.randrange(lo, F.p)
    choices = [-2, -1, 0, 1, 2] if zero_ok else [-2, -1, 1, 2]
    return F.norm(rng.choice(choices))


def _tensor(n, f):
    return [[[f(i, j, k) for k in range(n)] for j in range(n)] for i in range(n)]


def _zero(n):
    return _tensor(n, lambda i, j, k: 0)


# associative algebras of dimension <= 3 given by their nonzero products
_ASSOC = {
    1: [{}, {(0, 0): {0: 1}}],
    2: [{}, {(0, 0): {1: 1}},                                   # x^2 = y
        {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}},       # dual numbers
        {(0, 0): {0: 1}, (1, 1): {1: 1}},                       # F x F
        {(0, 0): {0: 1}, (0, 1): {1: 1}},                       # e x = x, x e = 0
        {(0, 0): {0: 1}, (1, 0): {1: 1}},
        {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {0: 1}, (1, 1): {1: 1}}],  # left-zero band
    3: [{}, {(0, 1): {2: 1}},                                   # xy = z
        {(0, 0): {1: 1}, (0, 1): {2: 1}, (1, 0): {2: 1}},       # x, x^2, x^3
        {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 2): {1: 1}, (2, 2): {2: 1}},  # upper triangular
        {(0, 0): {0: 1}, (1, 1): {1: 1}, (2, 2): {2: 1}},
        {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}, (0, 2): {2: 1}, (2, 0): {2: 1}},
        {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}, (0, 2): {2: 1}, (2, 0): {2: 1},
         (1, 1): {2: 1}}],                                      # F[x]/x^3
    # 2x2 matrices in the basis E11, E12, E21, E22
    4: [{(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 2): {0: 1}, (1, 3): {1: 1},
         (2, 0): {2: 1}, (2, 1): {3: 1}, (3, 2): {2: 1}, (3, 3): {3: 1}}],
}

# Leibniz algebras (zero dot)
_LEIBNIZ = {
    1: [{}],
    2: [{}, {(0, 0): {1: 1}}, {(0, 1): {1: 1}, (1, 0): {1: -1}}, {(1, 0): {1: 1}},
        {(0, 1): {1: 1}}],
    3: [{(0, 1): {2: 1}, (1, 0): {2: -1}}, {(0, 0): {2: 1}, (1, 1): {2: 1}},
        {(0, 0): {1: 1}, (0, 1): {2: 1}}, {(0, 2): {2: 1}, (1, 2): {2: 1}},
        {(2, 0): {0: 1}, (2, 1): {1: 1}}, {(0, 0): {2: 1}, (0, 1): {2: 1}}],
}


def change_basis(P: BiAlgebra, G: Matrix) -> BiAlgebra:
    """Structure constants in the basis f_i = sum_a G[a, i] e_a."""
    F, n = P.field, P.dim
    cols = G.columns()
    tabs = []
    for which in (P.mul, P.br):
        prods = [which(cols[i], cols[j]) for i in range(n) for j in range(n)]
        X = solve(G, Matrix.from_columns(F, n, prods))
        tab = _zero(n)
        for idx in range(n * n):
            i, j = divmod(idx, n)
            for k in range(n):
                tab[i][j][k] = X[k, idx]
        tabs.append(tab)
    return BiAlgebra.make(F, tabs[0], tabs[1])


def random_invertible(F: FieldSpec, n: int, rng: random.Random) -> Matrix:
    """
    Over F_p a uniformly random invertible matrix. Over Q a random product of
    a permutation and unit triangular matrices with small entries, so that the
    inverse is integral and structure constants stay integers.
    """
    if F.p:
        while True:
            G = Matrix.from_dense(F, [[_coef(F, rng) for _ in range(n)] for _ in range(n)], n)
            if rank(G) == n:
                return G
    perm = list(range(n))
    rng.shuffle(perm)
    lower = [[1 if i == j else (rng.choice((-1, 0, 0, 1)) if i > j else 0)
              for j in range(n)] for i in range(n)]
    upper = [[1 if i == j else (rng.choice((-1, 0, 0, 1)) if i < j else 0)
              for j in range(n)] for i in range(n)]
    Pm = Matrix.from_dense(F, [[1 if perm[i] == j else 0 for j in range(n)] for i in range(n)], n)
    return Pm @ Matrix.from_dense(F, lower, n) @ Matrix.from_dense(F, upper, n)


def _from_products(F, n, prods, scale=1):
    tab = _zero(n)
    for (i, j), v in prods.items():
        for k, c in v.items():
            tab[i][j][k] = F.norm(scale * c)
    return tab


def _two_step(F, n, rng, density):
    """Products of the first generators land in a central tail: every variety holds."""
    z = rng.randint(1, n - 1) if n > 1 else 0
    k = n - z

    def f(i, j, t):
        if i < k and j < k and t >= k and rng.random() < density:
            return _coef(F, rng, zero_ok=False)
        return 0

    return BiAlgebra.make(F, _tensor(n, f), _tensor(n, f))


def _random_derivation(A: BiAlgebra, rng, square_zero: bool):
    R = Representation.regular(A.replace(bracket=_zero(A.dim))).abelian()
    K = kernel(derivation_system(R))
    F, n = A.field, A.dim
    for _ in range(8):
        d = [0] * (n * n)
        for v in K.basis:
            c = _coef(F, rng)
            d = [F.norm(a + c * b) for a, b in zip(d, v)]
        D = Matrix.from_entries(F, n, n, [(k, i, d[i * n + k]) for i in range(n) for k in range(n)])
        if not square_zero or is_square_zero_derivation(A, D):
            return D
    return Matrix.zeros(F, n, n)


def _candidate(F, n, rng, density):
    kind = rng.choice(["two_step", "assoc", "commutator", "derivation", "linear", "leibniz",
                       "sparse"])
    if kind == "two_step":
        return _two_step(F, n, rng, density)
    if kind == "sparse":
        f = lambda i, j, k: _coef(F, rng, zero_ok=False) if rng.random() < density else 0
        return BiAlgebra.make(F, _tensor(n, f), _tensor(n, f))
    if kind == "leibniz":
        br = _from_products(F, n, rng.choice(_LEIBNIZ[n]))
        return BiAlgebra.make(F, _zero(n), br)
    A = BiAlgebra.make(F, _from_products(F, n, rng.choice(_ASSOC[n])), _zero(n))
    if kind == "assoc":
        return A
    if kind == "commutator":
        C = commutator_bracket(A)
        lam = _coef(F, rng, zero_ok=False)
        return C.replace(bracket=[[[F.norm(lam * x) for x in v] for v in row] for row in C.bracket])
    side = rng.choice(["left", "right"])
    if kind == "derivation":
        return derivation_bracket(A, _random_derivation(A, rng, True), side)
    D = Matrix.from_dense(F, [[_coef(F, rng) for _ in range(n)] for _ in range(n)], n)
    return derivation_bracket(A, D, side)


def _is_zero_table(tab) -> bool:
    return not any(v for row in tab for d in row for v in d.values())


def random_algebra(variety, field="Q", rng=None, dim=None, cfg: SampleConfig = SampleConfig()):
    variety = Variety.parse(variety)
    F = FieldSpec.parse(field)
    rng = rng or random.Random(0)
    for _ in range(cfg.tries):
        n = dim or rng.randint(cfg.min_dim_P, cfg.max_dim_P)
        P = _candidate(F, n, rng, cfg.density)
        P = change_basis(P, random_invertible(F, n, rng))
        if variety not in classify(P):
            continue
        # most catalogue algebras are commutative; keep some bracket-free samples only
        if n > 1 and _is_zero_table(P.bracket_table) and rng.random() > 0.3:
            continue
        return P
    raise GuardExceeded(f"no {variety} algebra found in {cfg.tries} tries")


# ---------------------------------------------------------------------------
# representations


def _restrict(P: BiAlgebra, basis, quotient=False):
    """Actions of P on the invariant subspace spanned by ``basis`` (or on P / span)."""
    F, n = P.field, P.dim
    k = len(basis)
    if quotient:
        comp = _extend(F, n, basis)
        B = Matrix.from_columns(F, n, list(basis) + comp)
        vecs, m, off = comp, len(comp), k
    else:
        B = Matrix.from_columns(F, n, list(basis))
        vecs, m, off = list(basis), k, 0
    mats = {}
    for kind, fn, left in (("dotL", P.mul, True), ("dotR", P.mul, False),
                           ("brL", P.br, True), ("brR", P.br, False)):
        out = []
        for i in range(n):
            e = P.dense(P.unit(i))
            imgs = [fn(e, v) if left else fn(v, e) for v in vecs]
            X = solve(B, Matrix.from_columns(F, n, imgs))
            out.append(X.select_rows(range(off, off + m)))
        mats[kind] = tuple(out)
    return Representation(P, m, mats["dotL"], mats["dotR"], mats["brL"], mats["brR"])


def _extend(F, n, basis):
    cur = list(basis)
    out = []
    for i in range(n):
        e = tuple(F.one if k == i else F.zero for k in range(n))
        if rank(Matrix.from_columns(F, n, cur + [e])) > len(cur):
            cur.append(e)
            out.append(e)
    return out


def _ideals(P: BiAlgebra, rng, tries=6):
    F, n = P.field, P.dim
    seen = []
    for _ in range(tries):
        v = [_coef(F, rng) for _ in range(n)]
        if not any(v):
            continue
        I = ideal_closure(P, [v])
        if 0 < I.dim < n and I not in seen:
            seen.append(I)
    return seen


def _change_module_basis(R: Representation, G: Matrix) -> Representation:
    F, m = R.field, R.module_dim
    Ginv = solve(G, Matrix.identity(F, m))
    conj = lambda A: Ginv @ A @ G
    return Representation(R.algebra, m, *(tuple(conj(A) for A in getattr(R, k))
                                          for k in ("dotL", "dotR", "brL", "brR")))


def _sparse_rep(P, m, rng, density):
    F = P.field
    mk = lambda: tuple(Matrix.from_dense(F, [[_coef(F, rng, False) if rng.random() < density else 0
                                              for _ in range(m)] for _ in range(m)], m)
                       for _ in range(P.dim))
    return Representation(P, m, mk(), mk(), mk(), mk())


def _direct_sum_reps(R1: Representation, R2: Representation) -> Representation:
    F = R1.field
    m1, m2 = R1.module_dim, R2.module_dim

    def blk(A, B):
        return Matrix.block(F, [m1, m2], [m1, m2], {(0, 0): A, (1, 1): B})

    return Representation(R1.algebra, m1 + m2, *(tuple(blk(a, b) for a, b in zip(getattr(R1, k), getattr(R2, k)))
                                                 for k in ("dotL", "dotR", "brL", "brR")))


def representation_candidates(P: BiAlgebra, m: int, rng, density=0.3):
    """Shuffled candidate representations of dimension m (not yet checked), zero action last."""
    out = []
    if P.dim == m:
        out.append(Representation.regular(P).abelian())
    for I in _ideals(P, rng):
        if I.dim == m:
            out.append(_restrict(P, I.basis))
        if P.dim - I.dim == m:
            out.append(_restrict(P, I.basis, quotient=True))
    for _ in range(4):
        out.append(_sparse_rep(P, m, rng, density))
    rng.shuffle(out)
    return out + [Representation.zero(P, m)]


def random_representation(variety, P: BiAlgebra, rng=None, dim=None,
                          cfg: SampleConfig = SampleConfig()) -> Representation:
    """A representation of P in the variety; falls back to the zero action."""
    variety = Variety.parse(variety)
    rng = rng or random.Random(0)
    F = P.field
    m = dim or rng.randint(cfg.min_dim_M, cfg.max_dim_M)
    for R in representation_candidates(P, m, rng, cfg.density):
        if check_action(variety, R):
            if m > 1:
                R = _change_module_basis(R, random_invertible(F, m, rng))
            return R
    if m == 2:
        parts = [random_representation(variety, P, rng, 1, cfg) for _ in range(2)]
        return _change_module_basis(_direct_sum_reps(*parts), random_invertible(F, 2, rng))
    return Representation.zero(P, m)


def random_instance(variety, field="Q", seed=0, cfg: SampleConfig = SampleConfig(),
                    dim_P=None, dim_M=None) -> Representation:
    rng = random.Random(f"{Variety.parse(variety).value}:{field}:{seed}")
    P = random_algebra(variety, field, rng, dim_P, cfg)
    return random_representation(variety, P, rng, dim_M, cfg)


def random_term(rng: random.Random, generators=("x", "y"), max_degree=5):
    """A random binary term with between 1 and ``max_degree`` leaves."""
    def build(k):
        if k == 1:
            return rng.choice(generators)
        left = rng.randint(1, k - 1)
        return (rng.choice((DOT, BR)), build(left), build(k - left))
    return build(rng.randint(1, max_degree))


# ---------------------------------------------------------------------------
# witness searches over a finite field


def _inner(A: BiAlgebra, x) -> Matrix:
    n = A.dim
    rows = {}
    for j in range(n):
        u = A.unit(j)
        xu = A.mul_sparse(x, u)
        ux = A.mul_sparse(u, x)
        for k in set(xu) | set(ux):
            c = A.field.norm(xu.get(k, 0) - ux.get(k, 0))
            if c:
                rows.setdefault(k, {})[j] = c
    return Matrix(A.field, n, n, [rows.get(i, {}) for i in range(n)])


def _all_derivation_brackets(A: BiAlgebra, side: str, square_zero: bool):
    F, n = A.field, A.dim
    if n >= 4:
        # too many linear maps; inner derivations x -> [a, x] only
        candidates = (_inner(A, {i: c for i, c in enumerate(a) if c})
                      for a in itertools.product(range(F.p), repeat=n))
    else:
        candidates = (Matrix.from_dense(F, [e[r * n:(r + 1) * n] for r in range(n)], n)
                      for e in itertools.product(range(F.p), repeat=n * n))
    for D in candidates:
        if square_zero and not is_square_zero_derivation(A, D):
            continue
        yield D, derivation_bracket(A, D, side)


def search_derivation_witness(field="F2", side="left", square_zero=True, want=(), avoid=(),
                              max_dim=3):
    """
    First (A, D, algebra) over a finite field where the derivation bracket on a
    catalogue associative algebra lies in every variety of ``want`` and none of ``avoid``.
    In dimension 4 (2x2 matrices) only inner derivations are tried.
    """
    F = FieldSpec.parse(field)
    want = {Variety.parse(v) for v in want}
    avoid = {Variety.parse(v) for v in avoid}
    for n in range(1, max_dim + 1):
        for prods in _ASSOC[n]:
            A = BiAlgebra.make(F, _from_products(F, n, prods), _zero(n))
            if not check_identity(A, "assoc"):
                continue
            for D, B in _all_derivation_brackets(A, side, square_zero):
                tags = classify(B)
                if want <= tags and not (avoid & tags):
                    return A, D, B
    return None
