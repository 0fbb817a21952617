"""
Exact linear algebra over Q and F_p.

Matrices are stored sparsely as one ``{col: value}`` dict per row. Two
elimination engines sit behind one contract:

* ``"flint"`` converts to python-flint's ``fmpq_mat`` / ``nmod_mat``;
* ``"python"`` is a pure sparse eliminator (used for cross-checking, and
  as the reference for the pivot rule: structurally shortest column first,
  then lowest index);
* ``"auto"`` (the default) picks the sparse eliminator for large matrices
  with very few nonzeros, flint otherwise.

Reduced row echelon form is canonical, so both engines must agree
entry for entry on ``rref`` and on every derived basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Sequence

import flint

from .errors import NotContained, ShapeMismatch


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Ground field: ``p == 0`` means Q, otherwise the prime field F_p."""

    p: int = 0

    def __post_init__(self):
        if self.p != 0 and not _is_prime(self.p):
            raise ValueError(f"characteristic {self.p} is not prime")

    @classmethod
    def parse(cls, spec) -> "FieldSpec":
        if isinstance(spec, FieldSpec):
            return spec
        if isinstance(spec, dict):
            return cls(int(spec["p"]))
        if isinstance(spec, int):
            return cls(spec)
        s = str(spec).strip().upper()
        if s in ("Q", "QQ", "RATIONALS"):
            return cls(0)
        for prefix in ("GF(", "F_", "F", "GF"):
            if s.startswith(prefix):
                return cls(int(s[len(prefix):].rstrip(")")))
        raise ValueError(f"unknown field {spec!r}")

    @property
    def is_rational(self) -> bool:
        return self.p == 0

    @property
    def name(self) -> str:
        return "Q" if self.p == 0 else f"F{self.p}"

    def to_json(self):
        return "Q" if self.p == 0 else {"p": self.p}

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def norm(self, x):
        """Coerce an int / Fraction / numeric string into the field."""
        # over Q integral values stay plain ints: much cheaper than Fraction
        if type(x) is int:
            return x % self.p if self.p else x
        if isinstance(x, str):
            x = Fraction(x)
        if self.p == 0:
            x = Fraction(x)
            return x.numerator if x.denominator == 1 else x
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def inv(self, x):
        if self.p == 0:
            return 1 / Fraction(x)
        return pow(int(x), -1, self.p)

    def fmt(self, x) -> str:
        if self.p == 0:
            x = Fraction(x)
            return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        return str(int(x) % self.p)

    def encode(self, x):
        """JSON encoding: rationals as strings, F_p elements as ints."""
        return self.fmt(x) if self.p == 0 else int(x) % self.p


QQ = FieldSpec(0)
F2 = FieldSpec(2)


class Matrix:
    """Sparse exact matrix. Treat instances as immutable."""

    __slots__ = ("field", "nrows", "ncols", "_rows")

    def __init__(self, field: FieldSpec, nrows: int, ncols: int, rows=None):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            rows = tuple({} for _ in range(nrows))
        self._rows = tuple(rows)
        assert len(self._rows) == nrows

    # construction -------------------------------------------------------
    @classmethod
    def zeros(cls, field, nrows, ncols):
        return cls(field, nrows, ncols)

    @classmethod
    def identity(cls, field, n):
        one = field.one
        return cls(field, n, n, [{i: one} for i in range(n)])

    @classmethod
    def from_dense(cls, field, rows: Sequence[Sequence], ncols: int | None = None):
        rows = list(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        out = []
        for r in rows:
            if len(r) != ncols:
                raise ShapeMismatch("ragged dense matrix")
            d = {}
            for j, x in enumerate(r):
                x = field.norm(x)
                if x:
                    d[j] = x
            out.append(d)
        return cls(field, len(out), ncols, out)

    @classmethod
    def from_entries(cls, field, nrows, ncols, entries):
        """Build from an iterable of (row, col, value); repeated keys add up."""
        rows = [dict() for _ in range(nrows)]
        for i, j, x in entries:
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise ShapeMismatch(f"entry ({i},{j}) outside {nrows}x{ncols}")
            d = rows[i]
            d[j] = d.get(j, 0) + x
        return cls(field, nrows, ncols, [_clean(field, d) for d in rows])

    @classmethod
    def from_columns(cls, field, nrows, columns: Sequence[Sequence]):
        rows = [dict() for _ in range(nrows)]
        for j, col in enumerate(columns):
            for i, x in enumerate(col):
                if x:
                    x = field.norm(x)
                    if x:
                        rows[i][j] = x
        return cls(field, nrows, len(columns), rows)

    # access -------------------------------------------------------------
    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def row(self, i) -> dict:
        return self._rows[i]

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i].get(j, self.field.zero)

    def entries(self):
        for i, r in enumerate(self._rows):
            for j in sorted(r):
                yield i, j, r[j]

    def nnz(self) -> int:
        return sum(len(r) for r in self._rows)

    def to_dense(self):
        z = self.field.zero
        out = []
        for r in self._rows:
            row = [z] * self.ncols
            for j, x in r.items():
                row[j] = x
            out.append(row)
        return out

    def column(self, j):
        z = self.field.zero
        return [r.get(j, z) for r in self._rows]

    def columns(self):
        cols = [[self.field.zero] * self.nrows for _ in range(self.ncols)]
        for i, r in enumerate(self._rows):
            for j, x in r.items():
                cols[j][i] = x
        return cols

    def is_zero(self) -> bool:
        return all(not r for r in self._rows)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.field == other.field and all(
            a == b for a, b in zip(self._rows, other._rows))

    def __hash__(self):
        return hash((self.shape, tuple(tuple(sorted(r.items())) for r in self._rows)))

    def __repr__(self):
        return f"Matrix({self.field.name}, {self.nrows}x{self.ncols}, nnz={self.nnz()})"

    def pretty(self) -> str:
        return "\n".join(" ".join(self.field.fmt(x) for x in row) for row in self.to_dense())

    # arithmetic ---------------------------------------------------------
    @property
    def T(self) -> "Matrix":
        rows = [dict() for _ in range(self.ncols)]
        for i, r in enumerate(self._rows):
            for j, x in r.items():
                rows[j][i] = x
        return Matrix(self.field, self.ncols, self.nrows, rows)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ShapeMismatch(f"{self.shape} @ {other.shape}")
        F = self.field
        orows = other._rows
        out = []
        for r in self._rows:
            acc = {}
            for k, x in r.items():
                for j, y in orows[k].items():
                    acc[j] = acc.get(j, 0) + x * y
            out.append(_clean(F, acc))
        return Matrix(F, self.nrows, other.ncols, out)

    def apply(self, v: Sequence) -> list:
        """Matrix times a dense column vector."""
        F = self.field
        out = []
        for r in self._rows:
            s = 0
            for j, x in r.items():
                s += x * v[j]
            out.append(F.norm(s))
        return out

    def _combine(self, other, sign):
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} vs {other.shape}")
        out = []
        for a, b in zip(self._rows, other._rows):
            d = dict(a)
            for j, x in b.items():
                d[j] = d.get(j, 0) + sign * x
            out.append(_clean(self.field, d))
        return Matrix(self.field, self.nrows, self.ncols, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "Matrix":
        F = self.field
        c = F.norm(c)
        if not c:
            return Matrix(F, self.nrows, self.ncols)
        return Matrix(F, self.nrows, self.ncols,
                      [{j: F.norm(c * x) for j, x in r.items()} for r in self._rows])

    def select_columns(self, cols: Sequence[int]) -> "Matrix":
        pos = {c: k for k, c in enumerate(cols)}
        rows = [{pos[j]: x for j, x in r.items() if j in pos} for r in self._rows]
        return Matrix(self.field, self.nrows, len(cols), rows)

    def select_rows(self, rows: Sequence[int]) -> "Matrix":
        return Matrix(self.field, len(rows), self.ncols, [dict(self._rows[i]) for i in rows])

    def permute_columns(self, perm: Sequence[int]) -> "Matrix":
        """Column j of the result is column perm[j] of self."""
        return self.select_columns(perm)

    @staticmethod
    def hstack(mats: Sequence["Matrix"]) -> "Matrix":
        mats = list(mats)
        F, n = mats[0].field, mats[0].nrows
        rows = [dict() for _ in range(n)]
        off = 0
        for m in mats:
            if m.nrows != n:
                raise ShapeMismatch("hstack row mismatch")
            for i, r in enumerate(m._rows):
                for j, x in r.items():
                    rows[i][j + off] = x
            off += m.ncols
        return Matrix(F, n, off, rows)

    @staticmethod
    def vstack(mats: Sequence["Matrix"]) -> "Matrix":
        mats = list(mats)
        F, c = mats[0].field, mats[0].ncols
        rows = []
        for m in mats:
            if m.ncols != c:
                raise ShapeMismatch("vstack column mismatch")
            rows.extend(dict(r) for r in m._rows)
        return Matrix(F, len(rows), c, rows)

    @staticmethod
    def block(field, row_sizes, col_sizes, blocks: dict) -> "Matrix":
        """Assemble from ``{(bi, bj): Matrix}``; missing blocks are zero."""
        roff = [0]
        for s in row_sizes:
            roff.append(roff[-1] + s)
        coff = [0]
        for s in col_sizes:
            coff.append(coff[-1] + s)
        rows = [dict() for _ in range(roff[-1])]
        for (bi, bj), m in blocks.items():
            if m.shape != (row_sizes[bi], col_sizes[bj]):
                raise ShapeMismatch(f"block {(bi, bj)} has shape {m.shape}, "
                                    f"expected {(row_sizes[bi], col_sizes[bj])}")
            r0, c0 = roff[bi], coff[bj]
            for i, r in enumerate(m._rows):
                tgt = rows[r0 + i]
                for j, x in r.items():
                    y = tgt.get(c0 + j, 0) + x
                    tgt[c0 + j] = y
        return Matrix(field, roff[-1], coff[-1], [_clean(field, d) for d in rows])


def _clean(F: FieldSpec, d: dict) -> dict:
    out = {}
    for j, x in d.items():
        x = F.norm(x)
        if x:
            out[j] = x
    return out


@dataclass(frozen=True)
class Subspace:
    """A subspace of F^ambient_dim given by an independent basis."""

    field: FieldSpec
    ambient_dim: int
    basis: tuple = dc_field(default=())

    @property
    def dim(self) -> int:
        return len(self.basis)

    def as_columns(self) -> Matrix:
        return Matrix.from_columns(self.field, self.ambient_dim, self.basis)

    def contains(self, v: Sequence) -> bool:
        if not self.basis:
            return all(not self.field.norm(x) for x in v)
        A = self.as_columns()
        return solve(A, Matrix.from_columns(self.field, self.ambient_dim, [v])) is not None

    def canonical(self) -> "Subspace":
        """Basis replaced by the rows of the reduced echelon form."""
        if not self.basis:
            return self
        R, piv = rref(Matrix.from_dense(self.field, self.basis, self.ambient_dim))
        return Subspace(self.field, self.ambient_dim,
                        tuple(tuple(row) for row in R.select_rows(range(len(piv))).to_dense()))

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.field == other.field and self.ambient_dim == other.ambient_dim
                and self.canonical().basis == other.canonical().basis)

    def __hash__(self):
        return hash((self.field, self.ambient_dim, self.canonical().basis))


# ---------------------------------------------------------------------------
# engines

DEFAULT_ENGINE = "auto"
SPARSE_MIN_CELLS = 100_000
SPARSE_MAX_DENSITY = 0.01


def _pick(M: "Matrix", engine):
    engine = engine or DEFAULT_ENGINE
    if engine != "auto":
        return engine
    cells = M.nrows * M.ncols
    if cells >= SPARSE_MIN_CELLS and M.nnz() < SPARSE_MAX_DENSITY * cells:
        return "python"
    return "flint"
DENSE_LIMIT = 64


def _to_flint(M: Matrix, integral_ok=False):
    """Dense flint copy; with ``integral_ok`` an integer Q-matrix becomes an fmpz_mat."""
    F = M.field
    flat = [0] * (M.nrows * M.ncols)
    c = M.ncols
    integral = True
    for i, r in enumerate(M._rows):
        base = i * c
        for j, x in r.items():
            if type(x) is not int:
                integral = False
                x = flint.fmpq(x.numerator, x.denominator)
            flat[base + j] = x
    if F.p:
        return flint.nmod_mat(M.nrows, M.ncols, flat, F.p)
    if integral and integral_ok:
        return flint.fmpz_mat(M.nrows, M.ncols, flat)
    return flint.fmpq_mat(M.nrows, M.ncols, flat)


def _compress(M: Matrix) -> Matrix:
    """Drop zero rows and zero columns (rank is unchanged)."""
    rows = [r for r in M._rows if r]
    used = sorted({j for r in rows for j in r})
    if len(rows) == M.nrows and len(used) == M.ncols:
        return M
    pos = {j: k for k, j in enumerate(used)}
    return Matrix(M.field, len(rows), len(used), [{pos[j]: x for j, x in r.items()} for r in rows])


def _from_flint(F: FieldSpec, A, nrows, ncols, filled=None) -> Matrix:
    """``filled`` limits the read to the leading rows (the rest are zero)."""
    ent = A.entries()
    rows = []
    for i in range(nrows if filled is None else filled):
        d = {}
        base = i * ncols
        for j in range(ncols):
            x = ent[base + j]
            if F.p:
                x = int(x)
                if x:
                    d[j] = x
            else:
                if x != 0:
                    q = int(x.q)
                    d[j] = int(x.p) if q == 1 else Fraction(int(x.p), q)
        rows.append(d)
    rows += [{} for _ in range(nrows - len(rows))]
    return Matrix(F, nrows, ncols, rows)


def _py_rank(M: Matrix) -> int:
    """Sparse elimination with the shortest-column pivot rule."""
    F = M.field
    rows = {i: dict(r) for i, r in enumerate(M._rows) if r}
    cols: dict[int, set] = {}
    for i, r in rows.items():
        for j in r:
            cols.setdefault(j, set()).add(i)
    rank = 0
    while cols:
        j = min(cols, key=lambda c: (len(cols[c]), c))
        holders = cols.pop(j)
        if not holders:
            continue
        piv = min(holders, key=lambda i: (len(rows[i]), i))
        prow = rows.pop(piv)
        for c in prow:
            if c != j:
                cols[c].discard(piv)
        inv = F.inv(prow[j])
        for i in holders:
            if i == piv:
                continue
            r = rows[i]
            f = r[j] * inv
            for c, x in prow.items():
                y = F.norm(r.get(c, 0) - f * x)
                if y:
                    if c not in r:
                        cols.setdefault(c, set()).add(i)
                    r[c] = y
                elif c in r:
                    del r[c]
                    if c != j:
                        cols[c].discard(i)
            if not r:
                del rows[i]
        for c in [c for c, s in cols.items() if not s]:
            del cols[c]
        rank += 1
    return rank


def _py_rref(M: Matrix):
    """Canonical Gauss-Jordan on sparse rows, columns in natural order."""
    F = M.field
    pending = [dict(r) for r in M._rows if r]
    pivrows: list[dict] = []
    pivcols: list[int] = []
    for j in range(M.ncols):
        k = next((t for t, r in enumerate(pending) if j in r), None)
        if k is None:
            continue
        prow = pending.pop(k)
        inv = F.inv(prow[j])
        prow = {c: F.norm(x * inv) for c, x in prow.items()}
        for group in (pending, pivrows):
            for t, r in enumerate(group):
                if j in r:
                    f = r[j]
                    for c, x in prow.items():
                        y = F.norm(r.get(c, 0) - f * x)
                        if y:
                            r[c] = y
                        else:
                            r.pop(c, None)
            pending[:] = [r for r in pending if r]
        pivrows.append(prow)
        pivcols.append(j)
    rows = pivrows + [dict() for _ in range(M.nrows - len(pivrows))]
    return Matrix(F, M.nrows, M.ncols, rows), tuple(pivcols)


def rank(M: Matrix, engine: str | None = None) -> int:
    if M.nrows == 0 or M.ncols == 0:
        return 0
    engine = _pick(M, engine)
    if engine == "python":
        return _py_rank(M)
    M = _compress(M)
    if M.nrows == 0:
        return 0
    return _to_flint(M, integral_ok=True).rank()


def rref(M: Matrix, engine: str | None = None):
    """Reduced row echelon form and the tuple of pivot columns."""
    if M.nrows == 0 or M.ncols == 0:
        return Matrix(M.field, M.nrows, M.ncols), ()
    engine = _pick(M, engine)
    if engine == "python":
        return _py_rref(M)
    R, r = _to_flint(M).rref()
    R = _from_flint(M.field, R, M.nrows, M.ncols, r)
    piv = tuple(min(R.row(i)) for i in range(r))
    return R, piv


def kernel(M: Matrix, engine: str | None = None) -> Subspace:
    """Null space basis read off the reduced echelon form (one vector per free column)."""
    F = M.field
    R, piv = rref(M, engine)
    pivset = set(piv)
    basis = []
    for f in range(M.ncols):
        if f in pivset:
            continue
        v = [F.zero] * M.ncols
        v[f] = F.one
        for i, pc in enumerate(piv):
            x = R.row(i).get(f)
            if x:
                v[pc] = F.norm(-x)
        basis.append(tuple(v))
    return Subspace(F, M.ncols, tuple(basis))


def image(M: Matrix, engine: str | None = None) -> Subspace:
    """Column space, spanned by the pivot columns of M."""
    _, piv = rref(M, engine)
    cols = M.select_columns(piv).columns() if piv else []
    return Subspace(M.field, M.nrows, tuple(tuple(c) for c in cols))


def span(field: FieldSpec, ambient_dim: int, vectors: Iterable[Sequence]) -> Subspace:
    vecs = [tuple(field.norm(x) for x in v) for v in vectors]
    if not vecs:
        return Subspace(field, ambient_dim, ())
    return image(Matrix.from_columns(field, ambient_dim, vecs))


def quotient_dim(inner: Subspace, outer: Subspace) -> int:
    if inner.ambient_dim != outer.ambient_dim:
        raise ShapeMismatch("ambient dimensions differ")
    if inner.dim:
        both = Matrix.from_columns(outer.field, outer.ambient_dim, list(outer.basis) + list(inner.basis))
        if rank(both) != outer.dim:
            raise NotContained("inner subspace is not contained in outer")
    return outer.dim - inner.dim


def solve(A: Matrix, B: Matrix, engine: str | None = None):
    """
    Solve A X = B column by column. Returns X (A.ncols x B.ncols) or None
    if some column is inconsistent. Free variables are set to zero, so the
    answer depends only on the column order of A.
    """
    if A.nrows != B.nrows:
        raise ShapeMismatch(f"solve {A.shape} vs {B.shape}")
    F = A.field
    n, k = A.ncols, B.ncols
    if k == 0:
        return Matrix(F, n, 0)
    A2, B2, used = _squeeze(A, B)
    m = A2.ncols
    R, piv = rref(Matrix.hstack([A2, B2]), engine)
    if piv and piv[-1] >= m:
        return None
    rows = [dict() for _ in range(n)]
    for i, pc in enumerate(piv):
        for c, x in R.row(i).items():
            if c >= m:
                rows[used[pc]][c - m] = x
    return Matrix(F, n, k, rows)


def _squeeze(A: Matrix, B: Matrix):
    """
    Drop equations that are zero on both sides and unknowns with a zero
    column. The dropped unknowns are free and would be set to zero anyway.
    """
    keep = [i for i in range(A.nrows) if A._rows[i] or B._rows[i]]
    used = sorted({j for i in keep for j in A._rows[i]})
    if len(keep) == A.nrows and len(used) == A.ncols:
        return A, B, list(range(A.ncols))
    pos = {j: t for t, j in enumerate(used)}
    A2 = Matrix(A.field, len(keep), len(used),
                [{pos[j]: x for j, x in A._rows[i].items()} for i in keep])
    B2 = Matrix(B.field, len(keep), B.ncols, [B._rows[i] for i in keep])
    return A2, B2, used


def solve_each(A: Matrix, B: Matrix, engine: str | None = None):
    """Like solve, but returns a list with None for each inconsistent column."""
    F = A.field
    n, k = A.ncols, B.ncols
    A2, B2, used = _squeeze(A, B)
    m = A2.ncols
    R, piv = rref(Matrix.hstack([A2, B2]), engine)
    ok = [True] * k
    sols = [dict() for _ in range(k)]
    for i, pc in enumerate(piv):
        row = R.row(i)
        if pc >= m:
            ok[pc - m] = False
            continue
        for c, x in row.items():
            if c >= m:
                sols[c - m][used[pc]] = x
    out = []
    for t in range(k):
        if not ok[t]:
            out.append(None)
        else:
            v = [F.zero] * n
            for j, x in sols[t].items():
                v[j] = x
            out.append(v)
    return out


def complement_basis(sub: Subspace, within: Subspace) -> list:
    """Vectors of ``within.basis`` extending a basis of ``sub`` (greedy, in order)."""
    F = sub.field
    vecs = list(sub.basis) + list(within.basis)
    if not vecs:
        return []
    _, piv = rref(Matrix.from_columns(F, sub.ambient_dim, vecs))
    return [vecs[j] for j in piv if j >= len(sub.basis)]
