"""
Finite-dimensional algebras with a dot and a bracket, given by structure
constants, together with identity checks, variety classification and the
standard constructions (commutator / derivation brackets, center, ideals,
quotients, Poissonification).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from enum import Enum
from functools import cached_property

from .errors import NotAnIdeal, NotAssociative, ShapeMismatch
from .exactlin import FieldSpec, Matrix, Subspace, kernel, rank, rref, span, solve
from .terms import BR, DOT, parse_poly


class Variety(str, Enum):
    ASSOC = "Assoc"
    LEIBNIZ = "Leibniz"
    AWBL = "AWBl"
    AWBR = "AWBr"
    AWBLR = "AWBlr"
    NPL = "NPl"
    NPR = "NPr"
    NPLR = "NPlr"
    POISSON = "Poisson"

    @classmethod
    def parse(cls, s) -> "Variety":
        if isinstance(s, Variety):
            return s
        key = str(s).strip().lower()
        for v in cls:
            if v.value.lower() == key:
                return v
        raise ValueError(f"unknown variety {s!r}")

    def __str__(self):
        return self.value


# Identities as signed sums of terms; variables are the letters a..d.
IDENTITY_TEXT = {
    "assoc": "(a*b)*c - a*(b*c)",
    "1.1": "[a*b,c] - a*[b,c] - [a,c]*b",
    "1.2": "[a,b*c] - b*[a,c] - [a,b]*c",
    "1.3": "[a,[b,c]] - [[a,b],c] + [[a,c],b]",
    "comm": "a*b - b*a",
    "antisym": "[a,b] + [b,a]",
    "alt": "[a,a]",
    "2.1": "[a,[b,c]] - [[a,b],c] + [[a,c],b]",
    "2.2": "[a,c]*[b,d] + [a,c]*[d,b] + [b,c]*[a,d] + [c,b]*[a,d]",
    "2.3": "a*c*[b,d] + [a,c]*d*b - c*a*[b,d] - [a,c]*b*d",
    "2.4": "[[a,c]*d,b] - [[a,c],b]*d + [a,c]*[b,d] + [b,c]*[a,d] - c*[[a,d],b] + [c*[a,d],b]",
    "2.5": "[a,b*[c,d]] + [a,[b,d]*c] - [[a,b*c],d] + [[a,d],b*c]",
    "2.6": "[a*b,c] - [a,c*b] + [b*c,a] - [b,a*c] + [c*a,b] - [c,b*a]",
    "2.7": ("[[a,c]*d,b] + [b,[a,c]*d] - [[b,a],c]*d + [[b,c],a]*d + [a,[b,c]*d]"
            " - [[a,b],c]*d - [[a,d],c*b] + [[a,d],c]*b + [c*[a,d],b]"),
}
IDENTITY_TEXT["2.8"] = IDENTITY_TEXT["2.6"]
IDENTITY_TEXT["leibniz"] = IDENTITY_TEXT["1.3"]

IDENTITIES = {k: parse_poly(v) for k, v in IDENTITY_TEXT.items()}

DEFINING = {
    Variety.ASSOC: ("assoc",),
    Variety.LEIBNIZ: ("1.3",),
    Variety.AWBL: ("assoc", "1.1"),
    Variety.AWBR: ("assoc", "1.2"),
    Variety.AWBLR: ("assoc", "1.1", "1.2"),
    Variety.NPL: ("assoc", "1.3", "1.1"),
    Variety.NPR: ("assoc", "1.3", "1.2"),
    Variety.NPLR: ("assoc", "1.3", "1.1", "1.2"),
    Variety.POISSON: ("assoc", "1.3", "1.1", "1.2", "comm", "antisym", "alt"),
}

DERIVED = ("2.1", "2.2", "2.3", "2.4", "2.5", "2.6", "2.7", "2.8")
PREMISE = {
    "2.1": Variety.LEIBNIZ,
    "2.2": Variety.NPLR,
    "2.3": Variety.AWBLR,
    "2.4": Variety.NPR,
    "2.5": Variety.NPL,
    "2.6": Variety.AWBLR,
    "2.7": Variety.NPR,
    "2.8": Variety.AWBLR,
}

# implication lattice: tag -> tags it implies
IMPLIES = {
    Variety.POISSON: {Variety.NPLR},
    Variety.NPLR: {Variety.NPL, Variety.NPR, Variety.AWBLR},
    Variety.NPL: {Variety.AWBL, Variety.LEIBNIZ},
    Variety.NPR: {Variety.AWBR, Variety.LEIBNIZ},
    Variety.AWBLR: {Variety.AWBL, Variety.AWBR},
    Variety.AWBL: {Variety.ASSOC},
    Variety.AWBR: {Variety.ASSOC},
}


def _variables(poly):
    names = set()

    def walk(t):
        if isinstance(t, str):
            names.add(t)
        else:
            walk(t[1])
            walk(t[2])

    for _, t in poly:
        walk(t)
    return sorted(names)


def _table(field, consts, dim):
    out = []
    for i in range(dim):
        row = []
        for j in range(dim):
            row.append({k: x for k, x in enumerate(consts[i][j]) if x})
        out.append(row)
    return out


@dataclass(frozen=True)
class BiAlgebra:
    field: FieldSpec
    dim: int
    basis: tuple
    dot: tuple
    bracket: tuple

    # construction ---------------------------------------------------------
    @classmethod
    def make(cls, field, dot, bracket=None, basis=None) -> "BiAlgebra":
        field = FieldSpec.parse(field)
        n = len(dot)
        if bracket is None:
            bracket = [[[0] * n for _ in range(n)] for _ in range(n)]
        for arr in (dot, bracket):
            if len(arr) != n or any(len(r) != n or any(len(c) != n for c in r) for r in arr):
                raise ShapeMismatch(f"structure constants must have shape {n}x{n}x{n}")
        norm = lambda arr: tuple(tuple(tuple(field.norm(x) for x in c) for c in r) for r in arr)
        basis = tuple(basis) if basis is not None else tuple(f"e{i + 1}" for i in range(n))
        return cls(field, n, basis, norm(dot), norm(bracket))

    @classmethod
    def zero(cls, field, n: int) -> "BiAlgebra":
        z = [[[0] * n for _ in range(n)] for _ in range(n)]
        return cls.make(field, z, z)

    @classmethod
    def from_products(cls, field, n, dot: dict = (), bracket: dict = (), basis=None):
        """Build from sparse ``{(i, j): {k: c}}`` product tables."""
        d = [[[0] * n for _ in range(n)] for _ in range(n)]
        b = [[[0] * n for _ in range(n)] for _ in range(n)]
        for tab, arr in ((dict(dot), d), (dict(bracket), b)):
            for (i, j), vec in tab.items():
                for k, c in vec.items():
                    arr[i][j][k] = c
        return cls.make(field, d, b, basis)

    def replace(self, dot=None, bracket=None) -> "BiAlgebra":
        return BiAlgebra.make(self.field, self.dot if dot is None else dot,
                              self.bracket if bracket is None else bracket, self.basis)

    # products ---------------------------------------------------------------
    @cached_property
    def dot_table(self):
        return _table(self.field, self.dot, self.dim)

    @cached_property
    def bracket_table(self):
        return _table(self.field, self.bracket, self.dim)

    def _mul(self, tab, u: dict, v: dict) -> dict:
        acc = {}
        for i, x in u.items():
            row = tab[i]
            for j, y in v.items():
                xy = x * y
                for k, c in row[j].items():
                    acc[k] = acc.get(k, 0) + xy * c
        F = self.field
        out = {}
        for k, c in acc.items():
            c = F.norm(c)
            if c:
                out[k] = c
        return out

    def mul_sparse(self, u: dict, v: dict) -> dict:
        return self._mul(self.dot_table, u, v)

    def br_sparse(self, u: dict, v: dict) -> dict:
        return self._mul(self.bracket_table, u, v)

    def mul(self, u, v) -> tuple:
        return self.dense(self.mul_sparse(self.sparse(u), self.sparse(v)))

    def br(self, u, v) -> tuple:
        return self.dense(self.br_sparse(self.sparse(u), self.sparse(v)))

    def sparse(self, v) -> dict:
        if isinstance(v, dict):
            return v
        F = self.field
        return {i: F.norm(x) for i, x in enumerate(v) if F.norm(x)}

    def dense(self, v: dict) -> tuple:
        z = self.field.zero
        out = [z] * self.dim
        for k, c in v.items():
            out[k] = c
        return tuple(out)

    def unit(self, i) -> dict:
        return {i: self.field.one}

    def left_matrix(self, which: str, i: int) -> Matrix:
        """Matrix of x -> e_i * x (which='dot') or x -> [e_i, x] (which='bracket')."""
        arr = self.dot if which == "dot" else self.bracket
        return Matrix.from_columns(self.field, self.dim, [arr[i][j] for j in range(self.dim)])

    def right_matrix(self, which: str, i: int) -> Matrix:
        arr = self.dot if which == "dot" else self.bracket
        return Matrix.from_columns(self.field, self.dim, [arr[j][i] for j in range(self.dim)])

    # serialization ----------------------------------------------------------
    def to_json(self) -> dict:
        F = self.field
        enc = lambda arr: [[[F.encode(x) for x in c] for c in r] for r in arr]
        return {"field": F.to_json(), "dim": self.dim, "basis": list(self.basis),
                "dot": enc(self.dot), "bracket": enc(self.bracket)}

    @classmethod
    def from_json(cls, data) -> "BiAlgebra":
        if isinstance(data, str):
            data = json.loads(data)
        F = FieldSpec.parse(data.get("field", "Q"))
        n = int(data["dim"])
        z = [[[0] * n for _ in range(n)] for _ in range(n)]
        A = cls.make(F, data.get("dot", z), data.get("bracket", z), data.get("basis"))
        if A.dim != n:
            raise ShapeMismatch(f"declared dim {n} but constants have dim {A.dim}")
        return A


@dataclass(frozen=True)
class LinearMap:
    source_dim: int
    target_dim: int
    matrix: Matrix

    def __post_init__(self):
        if self.matrix.shape != (self.target_dim, self.source_dim):
            raise ShapeMismatch(f"matrix {self.matrix.shape} does not match "
                                f"{self.source_dim} -> {self.target_dim}")

    def __call__(self, v):
        return self.matrix.apply(v)


def _as_matrix(A: BiAlgebra, D) -> Matrix:
    if isinstance(D, LinearMap):
        D = D.matrix
    if not isinstance(D, Matrix):
        D = Matrix.from_dense(A.field, D, A.dim)
    if D.shape != (A.dim, A.dim):
        raise ShapeMismatch(f"map has shape {D.shape}, algebra has dim {A.dim}")
    return D


# ---------------------------------------------------------------------------
# identities

def _eval_term(A: BiAlgebra, t, env, cache):
    if isinstance(t, str):
        return env[t]
    key = t
    if key in cache:
        return cache[key]
    l = _eval_term(A, t[1], env, cache)
    r = _eval_term(A, t[2], env, cache)
    out = A.mul_sparse(l, r) if t[0] == DOT else A.br_sparse(l, r)
    cache[key] = out
    return out


def evaluate_poly(A: BiAlgebra, poly, env: dict) -> dict:
    F = A.field
    acc = {}
    cache = {}
    for c, t in poly:
        for k, x in _eval_term(A, t, env, cache).items():
            acc[k] = acc.get(k, 0) + F.norm(c) * x
    return {k: F.norm(x) for k, x in acc.items() if F.norm(x)}


def identity_failure(A: BiAlgebra, tag: str, elements=None):
    """First basis assignment (as a dict var -> index) violating the identity, or None."""
    poly = IDENTITIES[tag]
    names = _variables(poly)
    idx = range(A.dim) if elements is None else elements
    for combo in itertools.product(idx, repeat=len(names)):
        env = {n: A.unit(i) for n, i in zip(names, combo)}
        if evaluate_poly(A, poly, env):
            return dict(zip(names, combo))
    return None


def check_identity(A: BiAlgebra, tag: str) -> bool:
    return identity_failure(A, tag) is None


def classify(A: BiAlgebra) -> frozenset:
    holds = {}

    def ok(tag):
        if tag not in holds:
            holds[tag] = check_identity(A, tag)
        return holds[tag]

    return frozenset(v for v, ids in DEFINING.items() if all(ok(t) for t in ids))


def check_derived_identities(A: BiAlgebra, tags=None) -> list:
    """One row per derived identity: premise status, identity status and a verdict."""
    tags = classify(A) if tags is None else tags
    rows = []
    for d in DERIVED:
        premise = PREMISE[d] in tags
        holds = check_identity(A, d)
        verdict = "VIOLATION" if premise and not holds else ("ok" if holds else "not-applicable")
        rows.append({"identity": d, "premise": PREMISE[d].value, "premise_holds": premise,
                     "holds": holds, "verdict": verdict})
    return rows


# ---------------------------------------------------------------------------
# constructions

def _arr(n, f):
    return [[[f(i, j, k) for k in range(n)] for j in range(n)] for i in range(n)]


def commutator_bracket(A: BiAlgebra) -> BiAlgebra:
    if not check_identity(A, "assoc"):
        raise NotAssociative("commutator bracket needs an associative dot")
    d = A.dot
    return A.replace(bracket=_arr(A.dim, lambda i, j, k: d[i][j][k] - d[j][i][k]))


def derivation_bracket(A: BiAlgebra, D, side: str) -> BiAlgebra:
    """[a,b] = a(Db) - (Db)a for side='left', (Da)b - b(Da) for side='right'."""
    D = _as_matrix(A, D)
    n = A.dim
    img = [A.sparse(D.column(j)) for j in range(n)]
    b = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if side.lower().startswith("l"):
                x, y = A.unit(i), img[j]
                v = _sub(A, A.mul_sparse(x, y), A.mul_sparse(y, x))
            elif side.lower().startswith("r"):
                x, y = img[i], A.unit(j)
                v = _sub(A, A.mul_sparse(x, y), A.mul_sparse(y, x))
            else:
                raise ValueError("side must be 'left' or 'right'")
            b[i][j] = list(A.dense(v))
    return A.replace(bracket=b)


def _sub(A, u, v):
    out = dict(u)
    for k, x in v.items():
        out[k] = A.field.norm(out.get(k, 0) - x)
    return {k: x for k, x in out.items() if x}


def _add(A, *vs):
    out = {}
    for v in vs:
        for k, x in v.items():
            out[k] = A.field.norm(out.get(k, 0) + x)
    return {k: x for k, x in out.items() if x}


def is_square_zero_derivation(A: BiAlgebra, D) -> bool:
    D = _as_matrix(A, D)
    if not (D @ D).is_zero():
        return False
    img = [A.sparse(D.column(j)) for j in range(A.dim)]
    Dv = lambda v: _add(A, *[{k: A.field.norm(c * x) for k, x in img[i].items()} for i, c in v.items()])
    for i in range(A.dim):
        for j in range(A.dim):
            lhs = Dv(A.mul_sparse(A.unit(i), A.unit(j)))
            rhs = _add(A, A.mul_sparse(img[i], A.unit(j)), A.mul_sparse(A.unit(i), img[j]))
            if lhs != rhs:
                return False
    return True


def center(P: BiAlgebra) -> Subspace:
    """Solutions z of z.e = e.z = [z,e] = [e,z] = 0 for every basis e."""
    n = P.dim
    blocks = []
    for which in ("dot", "bracket"):
        for i in range(n):
            blocks.append(P.right_matrix(which, i))  # z -> z * e_i
            blocks.append(P.left_matrix(which, i))   # z -> e_i * z
    if not blocks:
        return Subspace(P.field, 0, ())
    return kernel(Matrix.vstack(blocks))


def ideal_closure(P: BiAlgebra, generators) -> Subspace:
    F = P.field
    gens = [tuple(F.norm(x) for x in g) for g in generators]
    cur = span(F, P.dim, gens)
    while True:
        vecs = list(cur.basis)
        for v in cur.basis:
            sv = P.sparse(v)
            for i in range(P.dim):
                e = P.unit(i)
                for prod in (P.mul_sparse(e, sv), P.mul_sparse(sv, e),
                             P.br_sparse(e, sv), P.br_sparse(sv, e)):
                    vecs.append(P.dense(prod))
        nxt = span(F, P.dim, vecs)
        if nxt.dim == cur.dim:
            return cur
        cur = nxt


def _complement(P: BiAlgebra, I: Subspace):
    """Standard basis vectors extending I (greedy by pivot)."""
    F = P.field
    std = [tuple(F.one if k == i else F.zero for k in range(P.dim)) for i in range(P.dim)]
    cols = list(I.basis) + std
    _, piv = rref(Matrix.from_columns(F, P.dim, cols))
    return [j - len(I.basis) for j in piv if j >= len(I.basis)]


def quotient(P: BiAlgebra, I: Subspace) -> BiAlgebra:
    F = P.field
    closed = ideal_closure(P, I.basis)
    if closed.dim != I.dim:
        raise NotAnIdeal("subspace is not closed under the four products")
    comp = _complement(P, I)
    q = len(comp)
    basis_cols = list(I.basis) + [tuple(F.one if k == c else F.zero for k in range(P.dim)) for c in comp]
    Bm = Matrix.from_columns(F, P.dim, basis_cols)
    targets = []
    for a in comp:
        for b in comp:
            targets.append(P.dense(P.mul_sparse(P.unit(a), P.unit(b))))
            targets.append(P.dense(P.br_sparse(P.unit(a), P.unit(b))))
    X = solve(Bm, Matrix.from_columns(F, P.dim, targets)) if targets else None
    dot = [[[0] * q for _ in range(q)] for _ in range(q)]
    br = [[[0] * q for _ in range(q)] for _ in range(q)]
    t = 0
    for i in range(q):
        for j in range(q):
            for k in range(q):
                dot[i][j][k] = X[I.dim + k, t]
                br[i][j][k] = X[I.dim + k, t + 1]
            t += 2
    return BiAlgebra.make(F, dot, br, [P.basis[c] for c in comp])


def poissonification(P: BiAlgebra) -> BiAlgebra:
    gens = []
    for i in range(P.dim):
        for j in range(i, P.dim):
            u = P.unit(i) if i == j else _add(P, P.unit(i), P.unit(j))
            gens.append(P.dense(P.br_sparse(u, u)))
            gens.append(P.dense(_sub(P, P.mul_sparse(P.unit(i), P.unit(j)),
                                     P.mul_sparse(P.unit(j), P.unit(i)))))
    return quotient(P, ideal_closure(P, gens))


def underlying(P: BiAlgebra, which) -> BiAlgebra:
    which = Variety.parse(which)
    z = [[[0] * P.dim for _ in range(P.dim)] for _ in range(P.dim)]
    if which == Variety.ASSOC:
        return P.replace(bracket=z)
    if which == Variety.LEIBNIZ:
        return P.replace(dot=z)
    raise ValueError("underlying structure must be Assoc or Leibniz")


def load_algebra(path) -> BiAlgebra:
    with open(path) as fh:
        return BiAlgebra.from_json(json.load(fh))


# ---------------------------------------------------------------------------
# named examples

def upper_triangular(field="Q") -> BiAlgebra:
    """Span{E11, E12, E22} with matrix multiplication and commutator bracket."""
    # E11 E11 = E11, E11 E12 = E12, E12 E22 = E12, E22 E22 = E22
    A = BiAlgebra.from_products(field, 3, dot={(0, 0): {0: 1}, (0, 1): {1: 1},
                                               (1, 2): {1: 1}, (2, 2): {2: 1}},
                                basis=("E11", "E12", "E22"))
    return commutator_bracket(A)


def leibniz_xxy(field="Q") -> BiAlgebra:
    """Two-dimensional Leibniz algebra [x,x] = y, everything else zero."""
    return BiAlgebra.from_products(field, 2, bracket={(0, 0): {1: 1}}, basis=("x", "y"))


def dual_numbers(field="Q") -> BiAlgebra:
    """Span{1, eps} with eps^2 = 0 and zero bracket."""
    return BiAlgebra.from_products(field, 2, dot={(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}},
                                   basis=("1", "eps"))
