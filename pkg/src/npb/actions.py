"""
Representations, action axioms, derivations, semidirect products, crossed
modules and brute-force enumeration of abelian extensions.

Action tensors use the column convention: ``dotL[i]`` is the matrix of
``m -> e_i . m`` acting on coordinate columns of M, so entry ``[r][c]`` is
the r-th coordinate of ``e_i . m_c``. The same holds for ``dotR`` (``m . e_i``),
``brL`` (``[e_i, m]``) and ``brR`` (``[m, e_i]``).

On the direct sum Q = M + P the module comes first: basis indices
``0..m-1`` are M and ``m..m+n-1`` are P.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np

from .algebra import (DEFINING, IDENTITIES, BiAlgebra, LinearMap, Variety,
                      _variables, classify, evaluate_poly)
from .config import guards
from .errors import ActionAxiomsFail, GuardExceeded, ShapeMismatch
from .exactlin import FieldSpec, Matrix, Subspace, kernel

KINDS = ("dotL", "dotR", "brL", "brR")
EXTENSION_CANDIDATE_LIMIT = 2 ** 16


@dataclass(frozen=True)
class Representation:
    """P acting on M. ``module`` is M's own structure; None means abelian."""

    algebra: BiAlgebra
    module_dim: int
    dotL: tuple
    dotR: tuple
    brL: tuple
    brR: tuple
    module: BiAlgebra | None = None

    def __post_init__(self):
        n, m = self.algebra.dim, self.module_dim
        for kind in KINDS:
            mats = getattr(self, kind)
            if len(mats) != n:
                raise ShapeMismatch(f"{kind} needs {n} matrices, got {len(mats)}")
            for M in mats:
                if M.shape != (m, m):
                    raise ShapeMismatch(f"{kind} matrices must be {m}x{m}")
        if self.module is not None and self.module.dim != m:
            raise ShapeMismatch("module algebra has the wrong dimension")

    @property
    def field(self) -> FieldSpec:
        return self.algebra.field

    @classmethod
    def build(cls, P: BiAlgebra, m: int, dotL=None, dotR=None, brL=None, brR=None, module=None):
        """Construct from nested lists (row-major, one m x m matrix per basis element of P)."""
        F = P.field

        def mats(data):
            if data is None:
                return tuple(Matrix.zeros(F, m, m) for _ in range(P.dim))
            return tuple(M if isinstance(M, Matrix) else Matrix.from_dense(F, M, m) for M in data)

        return cls(P, m, mats(dotL), mats(dotR), mats(brL), mats(brR), module)

    @classmethod
    def zero(cls, P: BiAlgebra, m: int) -> "Representation":
        return cls.build(P, m)

    @classmethod
    def regular(cls, P: BiAlgebra) -> "Representation":
        """P acting on itself by its own products (M abelian is not assumed here)."""
        return cls(P, P.dim,
                   tuple(P.left_matrix("dot", i) for i in range(P.dim)),
                   tuple(P.right_matrix("dot", i) for i in range(P.dim)),
                   tuple(P.left_matrix("bracket", i) for i in range(P.dim)),
                   tuple(P.right_matrix("bracket", i) for i in range(P.dim)),
                   P)

    def abelian(self) -> "Representation":
        return Representation(self.algebra, self.module_dim, self.dotL, self.dotR,
                              self.brL, self.brR, None)

    def act(self, kind: str, i: int, v) -> list:
        return getattr(self, kind)[i].apply(v)

    def to_json(self) -> dict:
        F = self.field
        out = {"module_dim": self.module_dim}
        for kind in KINDS:
            out[kind] = [[[F.encode(x) for x in row] for row in M.to_dense()] for M in getattr(self, kind)]
        return out

    @classmethod
    def from_json(cls, P: BiAlgebra, data) -> "Representation":
        if isinstance(data, str):
            data = json.loads(data)
        m = int(data["module_dim"])
        return cls.build(P, m, *(data.get(k) for k in KINDS))


def load_representation(P: BiAlgebra, path) -> Representation:
    with open(path) as fh:
        return Representation.from_json(P, json.load(fh))


# ---------------------------------------------------------------------------
# semidirect product and action axioms

def _direct_sum(R: Representation) -> BiAlgebra:
    P, m, n = R.algebra, R.module_dim, R.algebra.dim
    N = m + n
    F = R.field
    dot = [[[F.zero] * N for _ in range(N)] for _ in range(N)]
    br = [[[F.zero] * N for _ in range(N)] for _ in range(N)]
    for i in range(n):
        for j in range(n):
            for k, c in enumerate(P.dot[i][j]):
                dot[m + i][m + j][m + k] = c
            for k, c in enumerate(P.bracket[i][j]):
                br[m + i][m + j][m + k] = c
    for i in range(n):
        for kind, tab, left in (("dotL", dot, True), ("dotR", dot, False),
                                ("brL", br, True), ("brR", br, False)):
            M = getattr(R, kind)[i]
            for c in range(m):
                for r in range(m):
                    x = M[r, c]
                    if x:
                        if left:
                            tab[m + i][c][r] = x
                        else:
                            tab[c][m + i][r] = x
    if R.module is not None:
        for a in range(m):
            for b in range(m):
                for k, c in enumerate(R.module.dot[a][b]):
                    dot[a][b][k] = c
                for k, c in enumerate(R.module.bracket[a][b]):
                    br[a][b][k] = c
    names = [f"m{k}" for k in range(m)] + [f"p{k}" for k in range(n)]
    return BiAlgebra.make(F, dot, br, names)


def action_failures(variety, R: Representation, limit: int | None = None) -> list:
    """
    Instances of the variety's identities on M + P that fail, over all basis
    triples containing at least one module element. Triples with two or three
    module elements are checked as well, although they vanish for abelian M.
    """
    variety = Variety.parse(variety)
    Q = _direct_sum(R)
    m = R.module_dim
    out = []
    if variety not in classify(R.algebra):
        out.append(f"P is not in {variety.value}")
    for tag in DEFINING[variety]:
        poly = IDENTITIES[tag]
        names = _variables(poly)
        for combo in itertools.product(range(Q.dim), repeat=len(names)):
            if all(i >= m for i in combo):
                continue
            env = {nm: Q.unit(i) for nm, i in zip(names, combo)}
            if evaluate_poly(Q, poly, env):
                label = ",".join(("m" if i < m else "p") + str(i if i < m else i - m) for i in combo)
                out.append(f"({tag}) at ({label})")
                if limit is not None and len(out) >= limit:
                    return out
    return out


def check_action(variety, R: Representation) -> bool:
    return not action_failures(variety, R, limit=1)


@dataclass(frozen=True)
class ExtensionWitness:
    total: BiAlgebra
    injection: LinearMap
    projection: LinearMap


def semidirect_product(variety, R: Representation) -> BiAlgebra:
    """M + P with (m1,p1).(m2,p2) = (m1.p2 + p1.m2 + m1.m2, p1 p2), likewise for the bracket."""
    fails = action_failures(variety, R, limit=3)
    if fails:
        raise ActionAxiomsFail("; ".join(fails))
    return _direct_sum(R)


def split_extension(variety, R: Representation) -> ExtensionWitness:
    Q = semidirect_product(variety, R)
    F = R.field
    m, n = R.module_dim, R.algebra.dim
    inc = Matrix.from_entries(F, m + n, m, [(k, k, 1) for k in range(m)])
    proj = Matrix.from_entries(F, n, m + n, [(k, m + k, 1) for k in range(n)])
    return ExtensionWitness(Q, LinearMap(m, m + n, inc), LinearMap(m + n, n, proj))


def induced_representation(W: ExtensionWitness, P: BiAlgebra) -> Representation:
    """Recover the actions of P on M from an extension, using the section P -> Q complementary to i(M)."""
    Q = W.total
    m = W.injection.source_dim
    n = P.dim
    F = Q.field
    inc = W.injection.matrix
    proj = W.projection.matrix
    # section: lift each basis vector of P via a solve against the projection
    from .exactlin import solve
    lifts = solve(proj, Matrix.identity(F, n))
    if lifts is None:
        raise ShapeMismatch("projection is not surjective")
    mats = {k: [] for k in KINDS}
    for i in range(n):
        q = lifts.column(i)
        cols = {k: [] for k in KINDS}
        for c in range(m):
            x = inc.column(c)
            for kind, val in (("dotL", Q.mul(q, x)), ("dotR", Q.mul(x, q)),
                              ("brL", Q.br(q, x)), ("brR", Q.br(x, q))):
                coords = solve(inc, Matrix.from_columns(F, m + n, [val]))
                cols[kind].append(coords.column(0))
        for kind in KINDS:
            mats[kind].append(Matrix.from_columns(F, m, cols[kind]))
    return Representation(P, m, *(tuple(mats[k]) for k in KINDS))


# ---------------------------------------------------------------------------
# derivations

def derivation_system(R: Representation) -> Matrix:
    """Constraint matrix on d in Hom(P, M); unknown (i, k) = coefficient of m_k in d(e_i) at index i*m + k."""
    P, m, n = R.algebra, R.module_dim, R.algebra.dim
    F = R.field
    rows = []

    for i in range(n):
        for j in range(n):
            for prod, rkind, lkind in ((P.dot, "dotR", "dotL"), (P.bracket, "brR", "brL")):
                # d(e_i * e_j) - d(e_i) * e_j - e_i * d(e_j) = 0, one row per coordinate of M
                block = [dict() for _ in range(m)]
                for t, c in enumerate(prod[i][j]):
                    if c:
                        for k in range(m):
                            block[k][t * m + k] = block[k].get(t * m + k, 0) + c
                Rm = getattr(R, rkind)[j]
                Lm = getattr(R, lkind)[i]
                for k in range(m):
                    for s in range(m):
                        a = Rm[k, s]
                        if a:
                            block[k][i * m + s] = block[k].get(i * m + s, 0) - a
                        b = Lm[k, s]
                        if b:
                            block[k][j * m + s] = block[k].get(j * m + s, 0) - b
                rows.extend(block)
    return Matrix.from_entries(F, len(rows), n * m,
                               [(r, v, c) for r, row in enumerate(rows) for v, c in row.items()])


def derivations(variety, R: Representation) -> Subspace:
    """Der(P, M) as a subspace of Hom(P, M) in coordinates i*m + k."""
    Variety.parse(variety)
    return kernel(derivation_system(R))


def is_derivation(R: Representation, d) -> bool:
    """d given as a flat coordinate vector (i*m + k)."""
    S = derivation_system(R)
    return not any(S.apply(list(d)))


def derivation_to_matrix(R: Representation, d) -> Matrix:
    m, n = R.module_dim, R.algebra.dim
    return Matrix.from_entries(R.field, m, n, [(k, i, d[i * m + k]) for i in range(n) for k in range(m)])


def ad(P: BiAlgebra, p) -> list:
    """ad_p(p') = -[p', p] as a flat vector in Hom(P, P) coordinates."""
    F = P.field
    n = P.dim
    out = [F.zero] * (n * n)
    for i in range(n):
        v = P.br(P.dense(P.unit(i)), p)
        for k in range(n):
            out[i * n + k] = F.norm(-v[k])
    return out


# ---------------------------------------------------------------------------
# crossed modules

def crossed_module_failures(variety, mu: Matrix, R: Representation) -> list:
    """
    mu: M -> P (a dim P x dim M matrix); R carries M's own products in ``module``
    (None means M abelian). Checks that mu is a homomorphism, that the action
    is a derived action, and the equivariance and Peiffer families on basis
    elements.
    """
    variety = Variety.parse(variety)
    P = R.algebra
    m, n = R.module_dim, P.dim
    F = R.field
    Mod = R.module if R.module is not None else BiAlgebra.zero(F, m)
    if mu.shape != (n, m):
        raise ShapeMismatch(f"mu must be {n}x{m}")
    out = [f"action: {f}" for f in action_failures(variety, R, limit=3)]
    if variety not in classify(Mod):
        out.append(f"M is not in {variety.value}")

    def mu_of(v):
        return tuple(mu.apply(v))

    def em(c):
        return tuple(F.one if k == c else F.zero for k in range(m))

    for a in range(m):
        for b in range(m):
            x, y = em(a), em(b)
            if mu_of(Mod.mul(x, y)) != P.mul(mu_of(x), mu_of(y)):
                out.append(f"mu(m.m') at ({a},{b})")
            if mu_of(Mod.br(x, y)) != P.br(mu_of(x), mu_of(y)):
                out.append(f"mu[m,m'] at ({a},{b})")
    for i in range(n):
        ei = P.dense(P.unit(i))
        for a in range(m):
            x = em(a)
            checks = (
                ("mu(p.m) = p.mu(m)", R.act("dotL", i, x), P.mul(ei, mu_of(x))),
                ("mu(m.p) = mu(m).p", R.act("dotR", i, x), P.mul(mu_of(x), ei)),
                ("mu[p,m] = [p,mu(m)]", R.act("brL", i, x), P.br(ei, mu_of(x))),
                ("mu[m,p] = [mu(m),p]", R.act("brR", i, x), P.br(mu_of(x), ei)),
            )
            for name, lhs, rhs in checks:
                if mu_of(lhs) != tuple(F.norm(c) for c in rhs):
                    out.append(f"{name} at (p{i},m{a})")

    def act_vec(kind, p, x):
        acc = [F.zero] * m
        for i, c in enumerate(p):
            if c:
                for k, y in enumerate(R.act(kind, i, x)):
                    acc[k] = F.norm(acc[k] + c * y)
        return tuple(acc)

    for a in range(m):
        for b in range(m):
            x, y = em(a), em(b)
            mx, my = mu_of(x), mu_of(y)
            if not (act_vec("dotL", mx, y) == Mod.mul(x, y) == act_vec("dotR", my, x)):
                out.append(f"mu(m).m' = m.m' = m.mu(m') at (m{a},m{b})")
            if not (act_vec("brL", mx, y) == Mod.br(x, y) == act_vec("brR", my, x)):
                out.append(f"[mu(m),m'] = [m,m'] = [m,mu(m')] at (m{a},m{b})")
    return out


def check_crossed_module(variety, mu: Matrix, R: Representation) -> bool:
    return not crossed_module_failures(variety, mu, R)


def ideal_crossed_module(P: BiAlgebra, ideal_basis) -> tuple:
    """Inclusion of a two-sided ideal I -> P with P acting on I by its own products."""
    F = P.field
    from .exactlin import solve
    basis = [list(v) for v in ideal_basis]
    k = len(basis)
    B = Matrix.from_columns(F, P.dim, basis)

    def coords(v):
        X = solve(B, Matrix.from_columns(F, P.dim, [v]))
        if X is None:
            raise ShapeMismatch("ideal not closed under the products")
        return X.column(0)

    mats = {kind: [] for kind in KINDS}
    for i in range(P.dim):
        ei = P.dense(P.unit(i))
        for kind, f in (("dotL", lambda x: P.mul(ei, x)), ("dotR", lambda x: P.mul(x, ei)),
                        ("brL", lambda x: P.br(ei, x)), ("brR", lambda x: P.br(x, ei))):
            mats[kind].append(Matrix.from_columns(F, k, [coords(f(b)) for b in basis]))
    dot = [[coords(P.mul(a, b)) for b in basis] for a in basis]
    br = [[coords(P.br(a, b)) for b in basis] for a in basis]
    module = BiAlgebra.make(F, dot, br)
    R = Representation(P, k, *(tuple(mats[kd]) for kd in KINDS), module)
    return B, R


# ---------------------------------------------------------------------------
# abelian extensions by brute force

def _poly_tensor(poly, D, B, N, p):
    """Values of the polynomial on all basis assignments, shape (N,)*k + (N,)."""
    names = _variables(poly)
    k = len(names)
    eye = np.eye(N, dtype=np.int64)

    def leaf(name):
        pos = names.index(name)
        shape = [1] * k + [N]
        shape[pos] = N
        return eye.reshape(shape)

    def ev(t):
        if isinstance(t, str):
            return leaf(t)
        a, b = ev(t[1]), ev(t[2])
        T = D if t[0] == "*" else B
        return np.einsum("...i,...j,ijk->...k", a, b, T) % p

    total = 0
    for c, t in poly:
        val = ev(t)
        total = total + (int(c) % p) * np.broadcast_to(val, (N,) * k + (N,))
    return np.asarray(total) % p


def _satisfies(polys, D, B, N, p) -> bool:
    for poly in polys:
        if np.any(_poly_tensor(poly, D, B, N, p)):
            return False
    return True


def _base_tensors(R: Representation, p: int):
    Q = _direct_sum(R.abelian())
    N = Q.dim
    D = np.array(Q.dot, dtype=object).astype(np.int64).reshape(N, N, N) % p
    B = np.array(Q.bracket, dtype=object).astype(np.int64).reshape(N, N, N) % p
    return D, B


def _extension_tensors(R, base, lam, mu_, p):
    m, n = R.module_dim, R.algebra.dim
    D, B = base[0].copy(), base[1].copy()
    D[m:, m:, :m] = lam
    B[m:, m:, :m] = mu_
    return D % p, B % p


def _transport(D, F, Finv, p):
    # D'(a, b) = F D(F^-1 a, F^-1 b) with F acting on column coordinates
    return np.einsum("ia,jb,abk,lk->ijl", Finv.T, Finv.T, D, F) % p


def enumerate_extensions(P: BiAlgebra, R: Representation, variety, field=None,
                         limit: int = EXTENSION_CANDIDATE_LIMIT) -> dict:
    """
    Count equivalence classes of abelian extensions of P by M inducing R.
    Candidates are all factor-set pairs (lambda, mu): P x P -> M for the dot and
    the bracket. Equivalences are the maps (m, p) -> (m + u(p), p).
    """
    variety = Variety.parse(variety)
    F = FieldSpec.parse(field) if field is not None else P.field
    p = F.p
    if p == 0:
        raise ValueError("extension enumeration needs a finite field")
    m, n = R.module_dim, P.dim
    cap = guards().extensions
    if m + n > cap:
        raise GuardExceeded(f"dim P + dim M = {m + n} exceeds the guard {cap} (NPB_GUARD_DIM)")
    nvars = 2 * n * n * m
    if p ** nvars > limit:
        raise GuardExceeded(f"{p ** nvars} candidates exceed the limit {limit}")
    polys = [IDENTITIES[t] for t in DEFINING[variety]]
    base = _base_tensors(R, p)
    valid = []
    for vals in itertools.product(range(p), repeat=nvars):
        arr = np.array(vals, dtype=np.int64)
        lam = arr[: n * n * m].reshape(n, n, m)
        mu_ = arr[n * n * m:].reshape(n, n, m)
        D, B = _extension_tensors(R, base, lam, mu_, p)
        if _satisfies(polys, D, B, m + n, p):
            valid.append(vals)
    index = {v: k for k, v in enumerate(valid)}
    parent = list(range(len(valid)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    N = m + n
    for uvals in itertools.product(range(p), repeat=n * m):
        U = np.array(uvals, dtype=np.int64).reshape(m, n)
        Fm = np.eye(N, dtype=np.int64)
        Fm[:m, m:] = U
        Finv = np.eye(N, dtype=np.int64)
        Finv[:m, m:] = (-U) % p
        if not U.any():
            continue
        for k, vals in enumerate(valid):
            arr = np.array(vals, dtype=np.int64)
            lam = arr[: n * n * m].reshape(n, n, m)
            mu_ = arr[n * n * m:].reshape(n, n, m)
            D, B = _extension_tensors(R, base, lam, mu_, p)
            D2, B2 = _transport(D, Fm, Finv, p), _transport(B, Fm, Finv, p)
            key = tuple(np.concatenate([D2[m:, m:, :m].ravel(), B2[m:, m:, :m].ravel()]).tolist())
            j = index.get(key)
            if j is None:
                raise AssertionError("transport left the candidate set")
            a, b = find(k), find(j)
            if a != b:
                parent[a] = b
    classes = len({find(k) for k in range(len(valid))})
    return {"variety": variety.value, "field": F.name, "dim_P": n, "dim_M": m,
            "candidates": p ** nvars, "valid": len(valid), "classes": classes}
