"""
Cochain complexes of a bialgebra P with coefficients in a representation M.

Coordinates: a cochain f in C^n(P, M) = Hom(P^{(x)n}, M) is the vector of the
coefficients of f(e_{i1}, ..., e_{in}), with multi-indices in lexicographic
order, so f(I)_k sits at position ``index(I) * m + k``.

The coefficient bimodule M^e = Hom(P, M) uses position ``q * m + k`` for the
k-th coordinate of g(e_q). With this convention C^{n+1}(P, M) and C^n(P, M^e)
share coordinates and theta_n is the identity matrix.

Complexes are assembled from named columns: ``H`` (Hochschild with
coefficients in M, degree n), ``L`` (Leibniz, degree n) and ``E`` (Hochschild
with coefficients in M^e, shifted: degree n holds C^{n-1}(P, M^e)). All of
them are barred, i.e. start in degree 1 (``E`` in degree 2). The NP complexes
replace the degree-1 term H^1 + L^1 by a single copy of Hom(P, M).
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass
from functools import cached_property

from .actions import Representation, check_action
from .algebra import BiAlgebra, Variety, classify
from .config import check_cochain_size
from .errors import ActionAxiomsFail, ShapeMismatch, VarietyMismatch
from .exactlin import Matrix, rank

# ---------------------------------------------------------------------------
# raw coboundaries


def _index(t, p):
    i = 0
    for x in t:
        i = i * p + x
    return i


def _nonzero(tab, p):
    """tab[i][j] dense vector -> tab_nz[i][j] list of (k, c) with c != 0."""
    return [[[(k, c) for k, c in enumerate(tab[i][j]) if c] for j in range(p)] for i in range(p)]


def _mat_entries(M: Matrix):
    return [(r, c, x) for r, c, x in M.entries()]


def hochschild_matrix(field, p, dot, left, right, m, n, sign="shifted") -> Matrix:
    """
    Matrix of d^n: C^n(P, N) -> C^{n+1}(P, N) for a bimodule N of dimension m,
    ``left[i]``/``right[i]`` the matrices of e_i . x and x . e_i.

    d f(p_1..p_{n+1}) = (-1)^{n+1} { p_1 f(p_2..) + sum_i (-1)^i f(.., p_i p_{i+1}, ..)
                                     + (-1)^{n+1} f(p_1..p_n) p_{n+1} }

    ``sign="standard"`` drops the global factor (-1)^{n+1}.
    """
    g = (-1) ** (n + 1) if sign == "shifted" else 1
    dnz = _nonzero(dot, p)
    L = [_mat_entries(A) for A in left]
    R = [_mat_entries(A) for A in right]
    ent = []
    for row, J in enumerate(itertools.product(range(p), repeat=n + 1)):
        base = row * m
        col = _index(J[1:], p) * m
        for r, c, x in L[J[0]]:
            ent.append((base + r, col + c, g * x))
        for i in range(n):
            s = g * (-1) ** (i + 1)
            for t, x in dnz[J[i]][J[i + 1]]:
                col = _index(J[:i] + (t,) + J[i + 2:], p) * m
                for k in range(m):
                    ent.append((base + k, col + k, s * x))
        s = g * (-1) ** (n + 1)
        col = _index(J[:n], p) * m
        for r, c, x in R[J[n]]:
            ent.append((base + r, col + c, s * x))
    return Matrix.from_entries(field, p ** (n + 1) * m, p ** n * m, ent)


def leibniz_matrix(field, p, bracket, left, right, m, n) -> Matrix:
    """
    Matrix of the Leibniz coboundary C^n_L(P, M) -> C^{n+1}_L(P, M):

    d f(p_1..p_{n+1}) = [p_1, f(p_2..)] + sum_{i>=2} (-1)^i [f(..^p_i..), p_i]
                        + sum_{i<j} (-1)^{j+1} f(.., [p_i, p_j], ..^p_j..)
    """
    bnz = _nonzero(bracket, p)
    L = [_mat_entries(A) for A in left]
    R = [_mat_entries(A) for A in right]
    ent = []
    for row, J in enumerate(itertools.product(range(p), repeat=n + 1)):
        base = row * m
        col = _index(J[1:], p) * m
        for r, c, x in L[J[0]]:
            ent.append((base + r, col + c, x))
        for i in range(1, n + 1):
            s = (-1) ** (i + 1)  # position i is the (i+1)-th argument
            col = _index(J[:i] + J[i + 1:], p) * m
            for r, c, x in R[J[i]]:
                ent.append((base + r, col + c, s * x))
        for i in range(n + 1):
            for j in range(i + 1, n + 1):
                s = (-1) ** j  # (-1)^{j+1} with 1-based j
                for t, x in bnz[J[i]][J[j]]:
                    K = J[:i] + (t,) + J[i + 1:j] + J[j + 1:]
                    col = _index(K, p) * m
                    for k in range(m):
                        ent.append((base + k, col + k, s * x))
    return Matrix.from_entries(field, p ** (n + 1) * m, p ** n * m, ent)


def _block_diag(field, mats, reps):
    ent = []
    m = mats.nrows
    for q in range(reps):
        for r, c, x in mats.entries():
            ent.append((q * m + r, q * m + c, x))
    return Matrix.from_entries(field, m * reps, m * reps, ent)


@dataclass(frozen=True)
class Bimodule:
    """Associative bimodule data: left[i] and right[i] are the matrices of e_i.x and x.e_i."""

    dim: int
    left: tuple
    right: tuple


def me_module(R: Representation) -> Bimodule:
    """M^e = Hom(P, M) with (p.g)(q) = p.g(q) and (g.p)(q) = g(q).p."""
    F, p = R.field, R.algebra.dim
    left = tuple(_block_diag(F, A, p) for A in R.dotL)
    right = tuple(_block_diag(F, A, p) for A in R.dotR)
    return Bimodule(p * R.module_dim, left, right)


def hochschild_coboundary(P: BiAlgebra, M, n: int, sign="shifted") -> Matrix:
    """``M`` is a Representation (dot actions are used) or a Bimodule."""
    if isinstance(M, Representation):
        M = Bimodule(M.module_dim, M.dotL, M.dotR)
    return hochschild_matrix(P.field, P.dim, P.dot, M.left, M.right, M.dim, n, sign)


def leibniz_coboundary(P: BiAlgebra, R: Representation, n: int) -> Matrix:
    return leibniz_matrix(P.field, P.dim, P.bracket, R.brL, R.brR, R.module_dim, n)


# ---------------------------------------------------------------------------
# the maps between the ingredient complexes


class CochainContext:
    """Caches every matrix of the ingredient complexes of one pair (P, M)."""

    def __init__(self, R: Representation, sign="shifted"):
        self.R = R
        self.P = R.algebra
        self.F = R.field
        self.p = R.algebra.dim
        self.m = R.module_dim
        self.sign = sign
        self.me = me_module(R)
        self._cache = {}

    def _get(self, key, make):
        if key not in self._cache:
            self._cache[key] = make()
        return self._cache[key]

    def dim_H(self, n):
        return self.m * self.p ** n if n >= 0 else 0

    def dim_E(self, n):
        """Dimension of C^n(P, M^e)."""
        return self.m * self.p ** (n + 1) if n >= 0 else 0

    def dH(self, n):
        return self._get(("dH", n), lambda: hochschild_matrix(
            self.F, self.p, self.P.dot, self.R.dotL, self.R.dotR, self.m, n, self.sign))

    def dE(self, n):
        me = self.me
        return self._get(("dE", n), lambda: hochschild_matrix(
            self.F, self.p, self.P.dot, me.left, me.right, me.dim, n, self.sign))

    def dL(self, n):
        return self._get(("dL", n), lambda: leibniz_matrix(
            self.F, self.p, self.P.bracket, self.R.brL, self.R.brR, self.m, n))

    def theta(self, n):
        """C^{n+1}(P, M) -> C^n(P, M^e); the identity in these coordinates."""
        return self._get(("theta", n), lambda: Matrix.identity(self.F, self.dim_H(n + 1)))

    def theta_prime(self, n):
        """theta'_n(f)(p_1..p_n)(q) = f(q, p_1..p_n)."""
        def make():
            p, m = self.p, self.m
            ent = []
            for J in itertools.product(range(p), repeat=n):
                for q in range(p):
                    row = (_index(J, p) * p + q) * m
                    col = _index((q,) + J, p) * m
                    for k in range(m):
                        ent.append((row + k, col + k, 1))
            return Matrix.from_entries(self.F, self.dim_E(n), self.dim_H(n + 1), ent)
        return self._get(("theta'", n), make)

    def _alpha(self, n, primed):
        p, m = self.p, self.m
        bnz = _nonzero(self.P.bracket, p)
        brL = [_mat_entries(A) for A in self.R.brL]
        brR = [_mat_entries(A) for A in self.R.brR]
        ent = []
        for J in itertools.product(range(p), repeat=n):
            for q in range(p):
                row = (_index(J, p) * p + q) * m
                col = _index(J, p) * m
                # main term: [f(J), p_q] or [p_q, f(J)]
                for r, c, x in (brL[q] if primed else brR[q]):
                    ent.append((row + r, col + c, x))
                if n == 1:
                    # extra term [p_j, f(q)] (resp. [f(q), p_j])
                    j = J[0]
                    for r, c, x in (brR[j] if primed else brL[j]):
                        ent.append((row + r, q * m + c, x))
                for i in range(n):
                    pair = bnz[q][J[i]] if primed else bnz[J[i]][q]
                    for t, x in pair:
                        col = _index(J[:i] + (t,) + J[i + 1:], p) * m
                        for k in range(m):
                            ent.append((row + k, col + k, -x))
        return Matrix.from_entries(self.F, self.dim_E(n), self.dim_H(n), ent)

    def alpha(self, n):
        return self._get(("alpha", n), lambda: self._alpha(n, False))

    def alpha_prime(self, n):
        return self._get(("alpha'", n), lambda: self._alpha(n, True))

    def _beta(self, n, th):
        if n % 2:
            return th(n) @ self.dL(n)
        return self.dE(n - 1) @ th(n - 1)

    def beta(self, n):
        return self._get(("beta", n), lambda: self._beta(n, self.theta))

    def beta_prime(self, n):
        return self._get(("beta'", n), lambda: self._beta(n, self.theta_prime))

    def complex(self, key: str, top: int) -> "Complex":
        """The layout ``key`` assembled in degrees 0..top (cached)."""
        return self._get(("complex", key, top), lambda: assemble(self, LAYOUTS[key], top))

    def arrow(self, name, n):
        return {"alpha": self.alpha, "alpha'": self.alpha_prime,
                "beta": self.beta, "beta'": self.beta_prime}[name](n)


# ---------------------------------------------------------------------------
# complexes


@dataclass(frozen=True)
class Column:
    name: str
    kind: str  # "H", "L" or "E"
    sign: int = 1


@dataclass(frozen=True)
class Arrow:
    src: str
    tgt: str
    map: str  # alpha, alpha', beta, beta'
    sign: int = 1


@dataclass(frozen=True)
class Layout:
    label: str
    columns: tuple
    arrows: tuple = ()
    merge_degree1: bool = False

    def column(self, name) -> Column:
        for c in self.columns:
            if c.name == name:
                return c
        raise KeyError(name)


H, L = Column("H", "H", -1), Column("L", "L", -1)
E1, E2 = Column("E1", "E"), Column("E2", "E")

LAYOUTS = {
    "npl": Layout("NPl", (H, E1, L), (Arrow("H", "E1", "alpha"), Arrow("L", "E1", "beta", -1)), True),
    "npr": Layout("NPr", (H, E2, L), (Arrow("H", "E2", "alpha'"), Arrow("L", "E2", "beta'", -1)), True),
    "nplr": Layout("NPlr", (H, E1, E2, L),
                   (Arrow("H", "E1", "alpha"), Arrow("H", "E2", "alpha'"),
                    Arrow("L", "E1", "beta", -1), Arrow("L", "E2", "beta'", -1)), True),
    "awbl": Layout("AWBl", (H, E1), (Arrow("H", "E1", "alpha"),)),
    "awbr": Layout("AWBr", (H, E2), (Arrow("H", "E2", "alpha'"),)),
    "awblr": Layout("AWBlr", (H, E1, E2), (Arrow("H", "E1", "alpha"), Arrow("H", "E2", "alpha'"))),
    # ingredient complexes with the differentials they inherit as summands
    "H": Layout("H", (H,)),
    "L": Layout("L", (L,)),
    "HL": Layout("H+L", (H, L)),
    "E1": Layout("E", (E1,)),
    "E2": Layout("E'", (E2,)),
    "EE": Layout("E+E'", (E1, E2)),
    "coneB": Layout("cone(-beta)", (L, E1), (Arrow("L", "E1", "beta", -1),)),
    "coneB'": Layout("cone(-beta')", (L, E2), (Arrow("L", "E2", "beta'", -1),)),
    "coneBB": Layout("cone(-beta,-beta')", (L, E1, E2),
                     (Arrow("L", "E1", "beta", -1), Arrow("L", "E2", "beta'", -1))),
}


def _sum_layout(label, parts):
    cols, arrows = [], []
    for prefix, key in parts:
        lay = LAYOUTS[key]
        cols += [Column(prefix + c.name, c.kind, c.sign) for c in lay.columns]
        arrows += [Arrow(prefix + a.src, prefix + a.tgt, a.map, a.sign) for a in lay.arrows]
    return Layout(label, tuple(cols), tuple(arrows))


LAYOUTS["coneA+coneB"] = _sum_layout("cone(alpha)+cone(-beta)", [("a", "awbl"), ("b", "coneB")])
LAYOUTS["coneA'+coneB'"] = _sum_layout("cone(alpha')+cone(-beta')", [("a", "awbr"), ("b", "coneB'")])
LAYOUTS["coneAA+coneBB"] = _sum_layout("cone(alpha,alpha')+cone(-beta,-beta')",
                                       [("a", "awblr"), ("b", "coneBB")])

VARIETY_KEY = {Variety.NPL: "npl", Variety.NPR: "npr", Variety.NPLR: "nplr",
               Variety.AWBL: "awbl", Variety.AWBR: "awbr", Variety.AWBLR: "awblr"}


@dataclass(frozen=True)
class CochainSpace:
    n: int
    blocks: tuple  # ((name, dim), ...)

    @property
    def dim(self) -> int:
        return sum(d for _, d in self.blocks)

    def offset(self, name) -> int:
        off = 0
        for b, d in self.blocks:
            if b == name:
                return off
            off += d
        raise KeyError(name)

    def block_dim(self, name) -> int:
        return dict(self.blocks).get(name, 0)


@dataclass
class Complex:
    """Degrees 0..top; ``d[n]`` maps degree n to degree n+1 for n < top."""

    label: str
    field: object
    spaces: list
    d: list
    layout: Layout | None = None

    @property
    def top(self) -> int:
        return len(self.spaces) - 1

    def dim(self, n) -> int:
        return self.spaces[n].dim if 0 <= n <= self.top else 0

    def differential(self, n) -> Matrix:
        if n < 0:
            return Matrix(self.field, self.dim(0), 0)
        return self.d[n]

    def check(self) -> list:
        """Degrees n with d^{n+1} d^n != 0."""
        return [n for n in range(len(self.d) - 1) if not (self.d[n + 1] @ self.d[n]).is_zero()]

    @cached_property
    def ranks(self) -> list:
        return [rank(D) for D in self.d]

    def rank(self, n) -> int:
        return self.ranks[n] if 0 <= n < len(self.d) else 0


def _present(col: Column, n: int) -> bool:
    return n >= (2 if col.kind == "E" else 1)


def _col_dim(ctx, col, n):
    return ctx.dim_E(n - 1) if col.kind == "E" else ctx.dim_H(n)


def _col_diff(ctx, col, n):
    if col.kind == "H":
        D = ctx.dH(n)
    elif col.kind == "L":
        D = ctx.dL(n)
    else:
        D = ctx.dE(n - 1)
    return D if col.sign == 1 else D.scale(col.sign)


def assemble(ctx: CochainContext, layout: Layout, top: int) -> Complex:
    check_cochain_size(len(layout.columns) * ctx.dim_E(top - 1), f"{layout.label} in degree {top}")
    spaces = []
    for n in range(top + 1):
        if layout.merge_degree1 and n == 1:
            spaces.append(CochainSpace(1, (("X", ctx.dim_H(1)),)))
        else:
            spaces.append(CochainSpace(n, tuple((c.name, _col_dim(ctx, c, n))
                                                for c in layout.columns if _present(c, n))))
    d = []
    for n in range(top):
        src, tgt = spaces[n], spaces[n + 1]
        rows = [dm for _, dm in tgt.blocks]
        ridx = {b: i for i, (b, _) in enumerate(tgt.blocks)}
        if layout.merge_degree1 and n == 1:
            # X = Hom(P, M) sits diagonally in H^1 + L^1
            blocks = {}

            def put(key, D):
                blocks[key] = blocks[key] + D if key in blocks else D

            for c in layout.columns:
                if c.kind in "HL":
                    put((ridx[c.name], 0), _col_diff(ctx, c, 1))
            for a in layout.arrows:
                put((ridx[a.tgt], 0), ctx.arrow(a.map, 1).scale(a.sign))
            d.append(Matrix.block(ctx.F, rows, [src.dim], blocks))
            continue
        cols = [dm for _, dm in src.blocks]
        cidx = {b: i for i, (b, _) in enumerate(src.blocks)}
        blocks = {}
        for c in layout.columns:
            if c.name in cidx and c.name in ridx:
                blocks[(ridx[c.name], cidx[c.name])] = _col_diff(ctx, c, n)
        for a in layout.arrows:
            if a.src in cidx and a.tgt in ridx:
                blocks[(ridx[a.tgt], cidx[a.src])] = ctx.arrow(a.map, n).scale(a.sign)
        d.append(Matrix.block(ctx.F, rows, cols, blocks))
    return Complex(layout.label, ctx.F, spaces, d, layout)


def _require(variety: Variety, R: Representation):
    P = R.algebra
    if variety not in classify(P):
        raise VarietyMismatch(f"P is not in {variety}")
    if not check_action(variety, R):
        raise ActionAxiomsFail(f"M is not a representation of P in {variety}")


def build_complex(variety, R: Representation, N: int, ctx: CochainContext | None = None,
                  check=True) -> Complex:
    """Complex for the variety in degrees 0..N+1 (enough for H^0..H^N)."""
    variety = Variety.parse(variety)
    if check:
        _require(variety, R)
    ctx = ctx or CochainContext(R)
    return ctx.complex(VARIETY_KEY[variety], N + 1)


def cohomology_dims(c: Complex, N: int) -> list:
    if c.top < N + 1:
        raise ShapeMismatch(f"complex only reaches degree {c.top}, need {N + 1}")
    return [c.dim(n) - c.rank(n) - c.rank(n - 1) for n in range(N + 1)]


def restricted_h2(variety, R: Representation, ctx: CochainContext | None = None, check=True) -> int:
    """dim Ker(d^2 restricted to the H and L summands) / Im d^1."""
    variety = Variety.parse(variety)
    if variety not in (Variety.NPL, Variety.NPR, Variety.NPLR):
        raise VarietyMismatch("restricted H^2 is defined for the NP varieties")
    c = build_complex(variety, R, 2, ctx, check)
    sp = c.spaces[2]
    cols = []
    for b in ("H", "L"):
        off = sp.offset(b)
        cols += range(off, off + sp.block_dim(b))
    D2 = c.d[2].select_columns(cols)
    return len(cols) - rank(D2) - c.rank(1)


# ---------------------------------------------------------------------------
# chain maps


@dataclass
class ChainMap:
    source: Complex
    target: Complex
    maps: dict  # degree -> Matrix
    shift: int = 0

    def failures(self) -> list:
        """Degrees n where target.d^n f^n != f^{n+1} source.d^n."""
        bad = []
        for n in sorted(self.maps):
            if n + 1 in self.maps and n < len(self.source.d) and n + self.shift < len(self.target.d):
                lhs = self.target.d[n + self.shift] @ self.maps[n]
                rhs = self.maps[n + 1] @ self.source.d[n]
                if lhs != rhs:
                    bad.append(n)
        return bad


def variety_maps(variety) -> tuple:
    """The maps among alpha, alpha', beta, beta' used by the variety's complex."""
    layout = LAYOUTS[VARIETY_KEY[Variety.parse(variety)]]
    used = {a.map for a in layout.arrows}
    return tuple(m for m in ("alpha", "alpha'", "beta", "beta'") if m in used)


def chain_map_failures(ctx: CochainContext, name: str, N: int) -> list:
    """
    Degrees n <= N where the family ``name`` fails dE^n f^n = f^{n+1} d^n
    (d = dH for alpha, alpha'; d = dL for beta, beta').
    """
    d = ctx.dH if name.startswith("alpha") else ctx.dL
    return [n for n in range(1, N + 1)
            if ctx.dE(n) @ ctx.arrow(name, n) != ctx.arrow(name, n + 1) @ d(n)]


# ---------------------------------------------------------------------------
# reports


def input_hash(R: Representation) -> str:
    data = {"algebra": R.algebra.to_json(), "module": R.to_json()}
    blob = json.dumps(data, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def cohomology_table(variety, R: Representation, N: int, verbose=False) -> list:
    """JSON-ready rows: a header then one row per degree."""
    variety = Variety.parse(variety)
    _require(variety, R)
    c = build_complex(variety, R, N, check=False)
    dims = cohomology_dims(c, N)
    rows = [{"variety": variety.value, "field": R.field.name, "dim_P": R.algebra.dim,
             "dim_M": R.module_dim, "max_degree": N, "input_hash": input_hash(R)}]
    std = None
    if verbose:
        cs = build_complex(variety, R, N, CochainContext(R, sign="standard"), check=False)
        std = cohomology_dims(cs, N)
    for n in range(N + 1):
        row = {"n": n, "cochain_dim": c.dim(n), "rank": c.rank(n), "h_dim": dims[n]}
        if std is not None:
            row["h_dim_standard_sign"] = std[n]
        rows.append(row)
    if variety in (Variety.NPL, Variety.NPR, Variety.NPLR) and N >= 2:
        rows[0]["restricted_h2"] = restricted_h2(variety, R, check=False)
    return rows
