"""
Free algebras of the six bracket varieties.

Normal forms are computed one multidegree at a time. A *candidate* word of
multidegree ``md`` is either a dot word (a flattened sequence of at least two
normal non-dot words) or a bracket ``[u, v]`` of two normal words. The
relations at ``md`` are the instances of the variety's defining identities
on normal words, evaluated with reduced products in the inner operations
and the raw (unreduced) product at the top. Row reduction with the largest
word as pivot sends every candidate to a combination of the non-pivot
candidates, which are the normal words.

With the word order used here (degree, then bracket > dot, brackets
compared right argument first) the leading words of the relations are
exactly the patterns the rewriting rules remove: ``[a*b, c]``,
``[a, b*c]``, ``[a, [b, c]]`` and ``[[a,c]*d, b]``, plus ordering
constraints such as ``b*a*[c,d]`` vs ``a*b*[c,d]``.

The oriented rules themselves are also available (``normalize_outermost``)
as an independent rewriting strategy.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .algebra import DEFINING, IDENTITIES, BiAlgebra, Variety, classify
from .config import guards
from .errors import GuardExceeded, VarietyMismatch
from .exactlin import QQ, FieldSpec, Matrix, kernel, rank
from .terms import BR, DOT, parse_term, term_str

FREE_VARIETIES = (Variety.AWBL, Variety.AWBR, Variety.AWBLR, Variety.NPL, Variety.NPR, Variety.NPLR)

GEN, DOTW, BRW = "g", ".", "["


def _has(variety, tag):
    return tag in DEFINING[variety]


def _md_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _md_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _submds(md):
    """Nonzero multidegrees strictly below md, componentwise."""
    for sub in itertools.product(*[range(x + 1) for x in md]):
        if any(sub) and sub != md:
            yield sub


def _splits(md, parts):
    """Ordered decompositions md = m1 + ... + m_parts into nonzero pieces."""
    if parts == 1:
        if any(md):
            yield (md,)
        return
    for first in _submds(md):
        for rest in _splits(_md_sub(md, first), parts - 1):
            yield (first,) + rest


class FreeAlgebra:
    """The free algebra on ``generators`` in one of the six varieties."""

    def __init__(self, variety, generators, field: FieldSpec = QQ,
                 max_degree: int | None = None):
        self.variety = Variety.parse(variety)
        if self.variety not in FREE_VARIETIES:
            raise VarietyMismatch(f"no free construction for {self.variety}")
        if isinstance(generators, str):
            generators = [generators]
        self.generators = tuple(generators)
        self.field = FieldSpec.parse(field)
        self.max_degree = max_degree if max_degree is not None else guards().free_degree
        self.identities = [IDENTITIES[t] for t in DEFINING[self.variety]]

        self._struct = []      # id -> structure tuple
        self._index = {}       # structure -> id
        self._keys = []        # id -> sort key
        self._mds = []
        self._normal = {}      # md -> list of normal ids, ascending
        self._nondot = {}      # md -> normal non-dot ids
        self._seqs = {}        # md -> all factor sequences (tuples of ids)
        self._nf = {}          # pivot id -> {normal id: coef}
        self._prod = {}
        self._term_cache = {}
        self.stats = {}        # md -> (candidates, relations, normal)

        n = len(self.generators)
        for i in range(n):
            md = tuple(1 if k == i else 0 for k in range(n))
            w = self._intern((GEN, i), md, (1, 0, i))
            self._normal[md] = [w]
            self._nondot[md] = [w]
            self.stats[md] = (1, 0, 1)

    # coefficient arithmetic kept native (ints where possible) on hot paths
    def _fix(self, x):
        p = self.field.p
        if p:
            return x % p
        if type(x) is Fraction and x.denominator == 1:
            return x.numerator
        return x

    def _inv(self, x):
        p = self.field.p
        if p:
            return pow(x, -1, p)
        if x == 1 or x == -1:
            return int(x)
        return 1 / Fraction(x)

    # word store ------------------------------------------------------------
    def _intern(self, struct, md, key):
        w = self._index.get(struct)
        if w is None:
            w = len(self._struct)
            self._struct.append(struct)
            self._index[struct] = w
            self._keys.append(key)
            self._mds.append(md)
        return w

    def _word_dot(self, factors):
        if len(factors) == 1:
            return factors[0]
        md = self._mds[factors[0]]
        for f in factors[1:]:
            md = _md_add(md, self._mds[f])
        key = (sum(md), 1, tuple(self._keys[f] for f in factors))
        return self._intern((DOTW, tuple(factors)), md, key)

    def _word_br(self, u, v):
        md = _md_add(self._mds[u], self._mds[v])
        key = (sum(md), 2, self._keys[v], self._keys[u])
        return self._intern((BRW, u, v), md, key)

    def _factors(self, w):
        s = self._struct[w]
        return s[1] if s[0] == DOTW else (w,)

    def degree_of(self, w) -> int:
        return sum(self._mds[w])

    def word_term(self, w):
        """The word as a Term, dot spines right-nested."""
        s = self._struct[w]
        if s[0] == GEN:
            return self.generators[s[1]]
        if s[0] == BRW:
            return (BR, self.word_term(s[1]), self.word_term(s[2]))
        fs = [self.word_term(f) for f in s[1]]
        t = fs[-1]
        for f in reversed(fs[:-1]):
            t = (DOT, f, t)
        return t

    def word_str(self, w) -> str:
        return term_str(self.word_term(w))

    # normal forms per multidegree -----------------------------------------------
    def _check_md(self, md):
        if len(md) != len(self.generators) or any(x < 0 for x in md) or not any(md):
            raise ValueError(f"bad multidegree {md}")
        if sum(md) > self.max_degree:
            raise GuardExceeded(f"degree {sum(md)} exceeds the cap {self.max_degree}")

    def ensure(self, md):
        md = tuple(md)
        if md in self._normal:
            return
        self._check_md(md)
        for sub in sorted(_submds(md), key=sum):
            self.ensure(sub)
        self._build(md)

    def _sequences(self, md):
        """All sequences of normal non-dot words with total multidegree md."""
        if md in self._seqs:
            return self._seqs[md]
        out = [(f,) for f in self._nondot.get(md, ())]
        for first in _submds(md):
            rest = _md_sub(md, first)
            heads = self._nondot[first]
            tails = self._sequences(rest)
            for f in heads:
                for t in tails:
                    out.append((f,) + t)
        self._seqs[md] = out
        return out

    def _candidates(self, md):
        cands = []
        for first in _submds(md):
            rest = _md_sub(md, first)
            for u in self._normal[first]:
                for v in self._normal[rest]:
                    cands.append(self._word_br(u, v))
        brackets = list(cands)
        for first in _submds(md):
            rest = _md_sub(md, first)
            for f in self._nondot[first]:
                for t in self._sequences(rest):
                    cands.append(self._word_dot((f,) + t))
        return brackets, cands

    def _raw(self, op, u, v):
        if op == DOT:
            return self._word_dot(self._factors(u) + self._factors(v))
        return self._word_br(u, v)

    def _raw_combo(self, op, x: dict, y: dict) -> dict:
        acc = {}
        for u, a in x.items():
            for v, b in y.items():
                w = self._raw(op, u, v)
                acc[w] = acc.get(w, 0) + a * b
        return acc

    def _eval_inner(self, t, env, cache):
        if isinstance(t, str):
            return env[t]
        if t in cache:
            return cache[t]
        out = self.mul(t[0], self._eval_inner(t[1], env, cache), self._eval_inner(t[2], env, cache))
        cache[t] = out
        return out

    def _relations(self, md):
        fix = self._fix
        for poly in self.identities:
            poly = [(fix(int(c)) if Fraction(c).denominator == 1 else c, t) for c, t in poly]
            names = sorted({n for _, t in poly for n in _names(t)})
            for parts in _splits(md, len(names)):
                pools = [self._normal[m] for m in parts]
                for ws in itertools.product(*pools):
                    env = {n: {w: 1} for n, w in zip(names, ws)}
                    cache = {}
                    acc = {}
                    for c, t in poly:
                        left = self._eval_inner(t[1], env, cache)
                        right = self._eval_inner(t[2], env, cache)
                        for w, x in self._raw_combo(t[0], left, right).items():
                            acc[w] = acc.get(w, 0) + c * x
                    row = {}
                    for w, x in acc.items():
                        x = fix(x)
                        if x:
                            row[w] = x
                    if row:
                        yield row

    def _build(self, md):
        fix, inv = self._fix, self._inv
        keys = self._keys
        brackets, cands = self._candidates(md)
        piv = {}
        nrel = 0
        for row in self._relations(md):
            nrel += 1
            r = row
            while r:
                lead = max(r, key=keys.__getitem__)
                prow = piv.get(lead)
                if prow is None:
                    k = inv(r[lead])
                    piv[lead] = {w: fix(x * k) for w, x in r.items()}
                    break
                f = r[lead]
                for w, x in prow.items():
                    y = fix(r.get(w, 0) - f * x)
                    if y:
                        r[w] = y
                    else:
                        r.pop(w, None)
        # interreduce in increasing order of leading word
        for lead in sorted(piv, key=keys.__getitem__):
            row = piv[lead]
            out = {}
            for w, x in row.items():
                if w == lead:
                    continue
                sub = self._nf.get(w)
                if sub is None:
                    out[w] = out.get(w, 0) + x
                else:
                    for w2, y in sub.items():
                        out[w2] = out.get(w2, 0) + x * y
            nf = {}
            for w, x in out.items():
                x = fix(-x)
                if x:
                    nf[w] = x
            self._nf[lead] = nf
        seen = set()
        normal = []
        for w in cands:
            if w not in piv and w not in seen:
                seen.add(w)
                normal.append(w)
        normal.sort(key=keys.__getitem__)
        self._normal[md] = normal
        self._nondot[md] = [w for w in normal if self._struct[w][0] != DOTW]
        self.stats[md] = (len(set(cands)), nrel, len(normal))

    # products -----------------------------------------------------------------
    def reduce(self, combo: dict) -> dict:
        fix = self._fix
        out = {}
        for w, c in combo.items():
            md = self._mds[w]
            self.ensure(md)
            sub = self._nf.get(w)
            if sub is None:
                out[w] = out.get(w, 0) + c
            else:
                for w2, y in sub.items():
                    out[w2] = out.get(w2, 0) + c * y
        out = {w: fix(c) for w, c in out.items()}
        return {w: c for w, c in out.items() if c}

    def mul_words(self, op, u, v) -> dict:
        key = (op, u, v)
        hit = self._prod.get(key)
        if hit is None:
            md = _md_add(self._mds[u], self._mds[v])
            self.ensure(md)
            hit = self.reduce({self._raw(op, u, v): 1})
            self._prod[key] = hit
        return hit

    def mul(self, op, x: dict, y: dict) -> dict:
        fix = self._fix
        acc = {}
        for u, a in x.items():
            for v, b in y.items():
                ab = a * b
                for w, c in self.mul_words(op, u, v).items():
                    acc[w] = acc.get(w, 0) + ab * c
        acc = {w: fix(c) for w, c in acc.items()}
        return {w: c for w, c in acc.items() if c}

    # public API ------------------------------------------------------------------
    def generator(self, name) -> "FreeElement":
        i = self.generators.index(name)
        return self.element({i: self.field.one})

    def element(self, combo: dict) -> "FreeElement":
        F = self.field
        items = [(w, F.norm(c)) for w, c in combo.items()]
        items = [(w, c) for w, c in items if c]
        return FreeElement(self, tuple(sorted(items, key=lambda kv: self._keys[kv[0]])))

    def normal_words(self, md):
        md = tuple(md)
        self.ensure(md)
        return list(self._normal[md])

    def multidegrees(self, n):
        k = len(self.generators)
        for md in itertools.product(range(n + 1), repeat=k):
            if sum(md) == n:
                yield md

    def basis_ids(self, n):
        ids = []
        for md in self.multidegrees(n):
            ids.extend(self.normal_words(md))
        ids.sort(key=self._keys.__getitem__)
        return ids

    def normalize(self, t) -> "FreeElement":
        """Innermost normalization: normalize the arguments, then multiply."""
        if isinstance(t, str) and t not in self.generators:
            t = parse_term(t)
        return self.element(self._nf_term(t))

    def _nf_term(self, t) -> dict:
        hit = self._term_cache.get(t)
        if hit is not None:
            return hit
        if isinstance(t, str):
            if t not in self.generators:
                raise ValueError(f"undeclared generator {t!r}")
            out = {self.generators.index(t): 1}
        else:
            op = DOT if t[0] == DOT else BR
            out = self.mul(op, self._nf_term(t[1]), self._nf_term(t[2]))
        self._term_cache[t] = out
        return out

    def normalize_outermost(self, t, budget: int = 200000) -> "FreeElement":
        """Outermost rule rewriting on the raw term, then normal forms of the leftovers."""
        if isinstance(t, str) and t not in self.generators:
            t = parse_term(t)
        F = self.field
        leftovers = rewrite_outermost(self.variety, t, F, budget)
        acc = {}
        for s, c in leftovers.items():
            for w, x in self._nf_term(s).items():
                acc[w] = acc.get(w, 0) + c * x
        return self.element({w: F.norm(x) for w, x in acc.items() if F.norm(x)})

    def is_normal_term(self, t) -> bool:
        nf = self._nf_term(t)
        if len(nf) != 1:
            return False
        (w, c), = nf.items()
        return c == self.field.one and self.word_term(w) == _right_nest(t)


def _right_nest(t):
    if isinstance(t, str):
        return t
    if t[0] == BR:
        return (BR, _right_nest(t[1]), _right_nest(t[2]))
    fs = _dot_factors(t)
    fs = [_right_nest(f) for f in fs]
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = (DOT, f, out)
    return out


def _names(t):
    if isinstance(t, str):
        return {t}
    return _names(t[1]) | _names(t[2])


@dataclass(frozen=True)
class NormalWord:
    variety: Variety
    word: object
    degree: int

    def __str__(self):
        return term_str(self.word)


@dataclass(frozen=True, eq=False)
class FreeElement:
    algebra: FreeAlgebra
    terms: tuple  # ((word id, coef), ...) in word order

    @property
    def variety(self):
        return self.algebra.variety

    def as_dict(self) -> dict:
        return dict(self.terms)

    def __eq__(self, other):
        if not isinstance(other, FreeElement):
            return NotImplemented
        return self.algebra is other.algebra and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def _same(self, other):
        if self.algebra is not other.algebra:
            raise VarietyMismatch("elements of different free algebras")

    def __add__(self, other):
        self._same(other)
        F = self.algebra.field
        acc = dict(self.terms)
        for w, c in other.terms:
            acc[w] = F.norm(acc.get(w, 0) + c)
        return self.algebra.element({w: c for w, c in acc.items() if c})

    def __neg__(self):
        F = self.algebra.field
        return self.algebra.element({w: F.norm(-c) for w, c in self.terms})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        F = self.algebra.field
        c = F.norm(c)
        return self.algebra.element({w: F.norm(c * x) for w, x in self.terms if F.norm(c * x)})

    def is_zero(self):
        return not self.terms

    def words(self):
        A = self.algebra
        return [NormalWord(A.variety, A.word_term(w), A.degree_of(w)) for w, _ in self.terms]

    def __str__(self):
        if not self.terms:
            return "0"
        F = self.algebra.field
        parts = []
        for w, c in reversed(self.terms):
            s = F.fmt(c)
            if F.is_rational and Fraction(c) < 0:
                sign, s = "-", F.fmt(-c)
            else:
                sign = "+"
            parts.append((sign, s, self.algebra.word_str(w)))
        out = []
        for k, (sign, s, w) in enumerate(parts):
            coef = "" if s == "1" else s + " "
            if k == 0:
                out.append(("-" if sign == "-" else "") + coef + w)
            else:
                out.append(f" {sign} {coef}{w}")
        return "".join(out)

    __repr__ = __str__


def free_dot(a: FreeElement, b: FreeElement) -> FreeElement:
    a._same(b)
    A = a.algebra
    return A.element(A.mul(DOT, a.as_dict(), b.as_dict()))


def free_bracket(a: FreeElement, b: FreeElement) -> FreeElement:
    a._same(b)
    A = a.algebra
    return A.element(A.mul(BR, a.as_dict(), b.as_dict()))


# ---------------------------------------------------------------------------
# oriented rules and outermost rewriting

def _dot_factors(t):
    if isinstance(t, str) or t[0] != DOT:
        return [t]
    return _dot_factors(t[1]) + _dot_factors(t[2])


def _dot_build(fs):
    t = fs[-1]
    for f in reversed(fs[:-1]):
        t = (DOT, f, t)
    return t


def _is_dot(t):
    return not isinstance(t, str) and t[0] == DOT


def _is_br(t):
    return not isinstance(t, str) and t[0] == BR


def root_rule(variety, t):
    """Apply the first applicable oriented rule at the root; None if none applies."""
    if not _is_br(t):
        return None
    _, L, R = t
    if _has(variety, "1.1") and _is_dot(L):
        fs = _dot_factors(L)
        a, b = fs[0], _dot_build(fs[1:])
        return [(1, (DOT, a, (BR, b, R))), (1, (DOT, (BR, a, R), b))]
    if _has(variety, "1.2") and _is_dot(R):
        fs = _dot_factors(R)
        b, c = fs[0], _dot_build(fs[1:])
        return [(1, (DOT, b, (BR, L, c))), (1, (DOT, (BR, L, b), c))]
    if _has(variety, "1.3") and _is_br(R):
        _, b, c = R
        return [(1, (BR, (BR, L, b), c)), (-1, (BR, (BR, L, c), b))]
    if variety == Variety.NPR and _is_dot(L):
        fs = _dot_factors(L)
        if _is_br(fs[0]):
            _, a, c = fs[0]
            d = _dot_build(fs[1:])
            b = R
            return [(1, (DOT, (BR, (BR, a, c), b), d)),
                    (-1, (DOT, (BR, a, c), (BR, b, d))),
                    (-1, (DOT, (BR, b, c), (BR, a, d))),
                    (1, (DOT, c, (BR, (BR, a, d), b))),
                    (-1, (BR, (DOT, c, (BR, a, d)), b))]
    return None


def forbidden_patterns(variety, t) -> list:
    """Subterms of t matching a pattern excluded from normal words of the variety."""
    variety = Variety.parse(variety)
    found = []

    def walk(u):
        if isinstance(u, str):
            return
        if _is_br(u):
            _, L, R = u
            if _has(variety, "1.3") and _is_br(R):
                found.append(("[a,[b,c]]", u))
            if _has(variety, "1.1") and _is_dot(L):
                found.append(("[a*b,c]", u))
            if _has(variety, "1.2") and _is_dot(R):
                found.append(("[a,b*c]", u))
            if variety == Variety.NPR and _is_dot(L) and _is_br(_dot_factors(L)[0]):
                found.append(("[[a,c]*d,b]", u))
        walk(u[1])
        walk(u[2])

    walk(t)
    return found


def _rewrite_once(variety, t):
    """Outermost-leftmost redex: returns the list of (coef, term) replacing t, or None."""
    r = root_rule(variety, t)
    if r is not None:
        return r
    if isinstance(t, str):
        return None
    op, l, rr = t
    sub = _rewrite_once(variety, l)
    if sub is not None:
        return [(c, (op, s, rr)) for c, s in sub]
    sub = _rewrite_once(variety, rr)
    if sub is not None:
        return [(c, (op, l, s)) for c, s in sub]
    return None


def rewrite_outermost(variety, t, field: FieldSpec = QQ, budget: int = 200000) -> dict:
    """Rewrite with the oriented rules until no redex remains; returns {term: coef}."""
    variety = Variety.parse(variety)
    work = {t: field.one}
    done = {}
    steps = 0
    while work:
        s, c = work.popitem()
        nxt = _rewrite_once(variety, s)
        if nxt is None:
            done[s] = field.norm(done.get(s, 0) + c)
            continue
        steps += 1
        if steps > budget:
            raise GuardExceeded(f"rewriting exceeded {budget} steps")
        for k, u in nxt:
            work[u] = field.norm(work.get(u, 0) + k * c)
    return {s: c for s, c in done.items() if c}


# ---------------------------------------------------------------------------
# public functions mirroring the module contract

_CACHE: dict = {}


def free_algebra(variety, generators, field=QQ) -> FreeAlgebra:
    key = (Variety.parse(variety), tuple(generators), FieldSpec.parse(field))
    if key not in _CACHE:
        _CACHE[key] = FreeAlgebra(*key)
    return _CACHE[key]


def enumerate_basis(variety, generators, n: int, field=QQ) -> list:
    if n < 1:
        raise ValueError("degree must be at least 1")
    A = free_algebra(variety, generators, field)
    return [NormalWord(A.variety, A.word_term(w), n) for w in A.basis_ids(n)]


def normalize(variety, t, generators=None, field=QQ) -> FreeElement:
    if isinstance(t, str):
        t = parse_term(t)
    if generators is None:
        generators = sorted(_names(t))
    return free_algebra(variety, generators, field).normalize(t)


def extend_map(variety, phi: dict, B: BiAlgebra, algebra: FreeAlgebra | None = None):
    """
    Evaluator of the unique homomorphism extending phi (generator -> vector of B).
    Returns a function FreeElement -> dense vector.
    """
    variety = Variety.parse(variety)
    if variety not in classify(B):
        raise VarietyMismatch(f"target algebra is not in {variety}")
    F = B.field
    cache = {}

    def word_value(A, w):
        if w in cache:
            return cache[w]
        s = A._struct[w]
        if s[0] == GEN:
            out = B.sparse(phi[A.generators[s[1]]])
        elif s[0] == BRW:
            out = B.br_sparse(word_value(A, s[1]), word_value(A, s[2]))
        else:
            out = word_value(A, s[1][0])
            for f in s[1][1:]:
                out = B.mul_sparse(out, word_value(A, f))
        cache[w] = out
        return out

    def evaluate(x: FreeElement):
        if x.algebra.variety != variety:
            raise VarietyMismatch("element from another variety")
        acc = {}
        for w, c in x.terms:
            for k, y in word_value(x.algebra, w).items():
                acc[k] = acc.get(k, 0) + c * y
        return B.dense({k: F.norm(v) for k, v in acc.items() if F.norm(v)})

    return evaluate


def interpret(t, phi: dict, B: BiAlgebra):
    """Direct recursive evaluation of a term in B."""
    if isinstance(t, str):
        return tuple(B.field.norm(x) for x in phi[t])
    a = interpret(t[1], phi, B)
    b = interpret(t[2], phi, B)
    return B.mul(a, b) if t[0] == DOT else B.br(a, b)


def truncated_free_algebra(variety, generators, d: int, field=QQ) -> BiAlgebra:
    """Normal words of degree <= d; products landing above degree d are zero."""
    if d < 1:
        raise ValueError("truncation degree must be at least 1")
    A = free_algebra(variety, generators, field)
    ids = []
    for n in range(1, d + 1):
        ids.extend(A.basis_ids(n))
    pos = {w: i for i, w in enumerate(ids)}
    N = len(ids)
    dot = [[[0] * N for _ in range(N)] for _ in range(N)]
    br = [[[0] * N for _ in range(N)] for _ in range(N)]
    for i, u in enumerate(ids):
        for j, v in enumerate(ids):
            if A.degree_of(u) + A.degree_of(v) > d:
                continue
            for w, c in A.mul_words(DOT, u, v).items():
                dot[i][j][pos[w]] = c
            for w, c in A.mul_words(BR, u, v).items():
                br[i][j][pos[w]] = c
    return BiAlgebra.make(A.field, dot, br, [A.word_str(w) for w in ids])


# ---------------------------------------------------------------------------
# underlying associative / Leibniz structure

def _dense(A, combo, pos):
    v = [A.field.zero] * len(pos)
    for w, c in combo.items():
        v[pos[w]] = c
    return v


def _rank_of(A, combos, md):
    cols = A.normal_words(md)
    if not combos:
        return 0
    pos = {w: i for i, w in enumerate(cols)}
    return rank(Matrix.from_columns(A.field, len(cols), [_dense(A, c, pos) for c in combos]))


def _sequences_of(pool_by_md, md):
    """All sequences of elements of a graded pool with total multidegree md."""
    out = []
    for m, items in pool_by_md.items():
        if all(x <= y for x, y in zip(m, md)):
            rest = _md_sub(md, m)
            if not any(rest):
                out.extend((w,) for w in items)
            else:
                for tail in _sequences_of(pool_by_md, rest):
                    out.extend((w,) + tail for w in items)
    return out


def _all_mds(A, n):
    mds = []
    for k in range(1, n + 1):
        mds.extend(A.multidegrees(k))
    return mds


def underlying_free_basis_report(variety, generators, kind, n: int, field=QQ) -> dict:
    """
    Check in degrees <= n whether the underlying associative or Leibniz
    algebra is free.

    Associative side: the proposed generators are the generators plus the
    normal bracket words; all dot products of them must be independent and
    span each graded piece.

    Leibniz side: a complement of [P, P] is chosen greedily, preferring the
    dot words ``a1*...*ak`` and ``a1*...*ak*[..]`` (left varieties) or
    ``[..]*a1*...*ak`` (right varieties) with generators ai, then any other
    normal word. All left-normed brackets of the chosen generators must be
    independent and span. ``shape_sufficient`` records whether the preferred
    shapes alone gave the complement.
    """
    variety = Variety.parse(variety)
    kind = Variety.parse(kind)
    if kind not in (Variety.ASSOC, Variety.LEIBNIZ):
        raise ValueError("kind must be Assoc or Leibniz")
    if kind == Variety.LEIBNIZ and not _has(variety, "1.3"):
        raise VarietyMismatch(f"the bracket of {variety.value} is not a Leibniz bracket")
    A = free_algebra(variety, generators, field)
    one = A.field.one
    rows = []
    ok = True
    shapes_ok = True
    pool = {}
    for md in _all_mds(A, n):
        normal = A.normal_words(md)
        row = {"multidegree": list(md), "dim": len(normal)}
        if kind == Variety.ASSOC:
            picked = [w for w in normal if A._struct[w][0] != DOTW]
            op = DOT
        else:
            brackets = []
            for first in _submds(md):
                for u in A.normal_words(first):
                    for v in A.normal_words(_md_sub(md, first)):
                        brackets.append(A.mul_words(BR, u, v))
            shaped = [w for w in normal if _leibniz_shape(A, variety, w)]
            others = [w for w in normal if not _leibniz_shape(A, variety, w)]
            picked = _greedy_complement(A, md, brackets, shaped + others)
            extra = [A.word_str(w) for w in picked if w in set(others)]
            shapes_ok = shapes_ok and not extra
            row["outside_shapes"] = extra
            op = BR
        if picked:
            pool[md] = picked
        combos = []
        for seq in _sequences_of(pool, md):
            x = {seq[0]: one}
            for w in seq[1:]:
                x = A.mul(op, x, {w: one})
            combos.append(x)
        seqs = _sequences_of(pool, md)
        r = _rank_of(A, combos, md)
        independent = r == len(combos)
        spanning = r == len(normal)
        ok = ok and independent and spanning
        row.update({"generators": len(picked), "free_words": len(combos), "rank": r,
                    "independent": independent, "spanning": spanning})
        if not independent:
            row["dependence"] = _dependence(A, combos, seqs, md, op)
        rows.append(row)
    out = {"variety": variety.value, "kind": kind.value, "generators": list(A.generators),
           "max_degree": n, "rows": rows, "free": ok}
    if kind == Variety.LEIBNIZ:
        out["shape_sufficient"] = shapes_ok
    return out


def _dependence(A, combos, seqs, md, op) -> str:
    """One kernel vector among the free words, written out."""
    cols = A.normal_words(md)
    pos = {w: i for i, w in enumerate(cols)}
    K = kernel(Matrix.from_columns(A.field, len(cols), [_dense(A, c, pos) for c in combos]))
    v = K.basis[0]
    join = "." if op == DOT else ","
    parts = []
    for i, c in enumerate(v):
        if c:
            word = join.join(A.word_str(w) for w in seqs[i])
            parts.append(f"{A.field.fmt(c)}<{word}>")
    return " + ".join(parts)


def _leibniz_shape(A, variety, w):
    """Generators and dot words a1*..*ak, plus one bracket factor at the end (left) or front (right)."""
    s = A._struct[w]
    if s[0] == GEN:
        return True
    if s[0] != DOTW:
        return False
    fs = s[1]
    kinds = [A._struct[f][0] for f in fs]
    if all(k == GEN for k in kinds):
        return True
    if variety in (Variety.NPL, Variety.AWBL, Variety.NPLR, Variety.AWBLR):
        if kinds[-1] == BRW and all(k == GEN for k in kinds[:-1]):
            return True
    if variety in (Variety.NPR, Variety.AWBR, Variety.NPLR, Variety.AWBLR):
        if kinds[0] == BRW and all(k == GEN for k in kinds[1:]):
            return True
    return False


def _greedy_complement(A, md, spanning_combos, candidates):
    cols = A.normal_words(md)
    pos = {w: i for i, w in enumerate(cols)}
    base = [_dense(A, c, pos) for c in spanning_combos]
    r0 = rank(Matrix.from_columns(A.field, len(cols), base)) if base else 0
    picked = []
    cur = list(base)
    for w in candidates:
        trial = cur + [_dense(A, {w: A.field.one}, pos)]
        r = rank(Matrix.from_columns(A.field, len(cols), trial))
        if r > r0 + len(picked):
            picked.append(w)
            cur = trial
    return picked


def dependence_witnesses(variety=Variety.NPLR, field=QQ) -> list:
    """
    Nontrivial linear relations among would-be free words in the free algebra
    on four generators a, b, c, d (multidegree 1,1,1,1): associative words in
    X and brackets [x, y], and brackets of dot monomials for the Leibniz side.
    """
    variety = Variety.parse(variety)
    A = free_algebra(variety, ("a", "b", "c", "d"), field)
    cases = []
    if variety == Variety.NPLR:
        cases.append(("2.2", "Assoc", ["[a,c]*[b,d]", "[a,c]*[d,b]", "[b,c]*[a,d]", "[c,b]*[a,d]"], [1, 1, 1, 1]))
    if variety in (Variety.NPLR, Variety.AWBLR):
        cases.append(("2.3", "Assoc", ["a*c*[b,d]", "[a,c]*d*b", "c*a*[b,d]", "[a,c]*b*d"], [1, 1, -1, -1]))
    if variety == Variety.NPLR:
        cases.append(("2.6", "Leibniz", ["[a*b,c]", "[a,c*b]", "[b*c,a]", "[b,a*c]", "[c*a,b]", "[c,b*a]"],
                      [1, -1, 1, -1, 1, -1]))
    out = []
    for tag, kind, words, coefs in cases:
        combos = [A._nf_term(parse_term(w)) for w in words]
        total = {}
        for c, x in zip(coefs, combos):
            for w, y in x.items():
                total[w] = A.field.norm(total.get(w, 0) + c * y)
        vanishes = not any(total.values())
        # the words are pairwise distinct free words on the would-be generators
        distinct = len(set(words)) == len(words)
        out.append({"identity": tag, "kind": kind, "words": words, "coefficients": coefs,
                    "relation_vanishes": vanishes, "distinct_free_words": distinct,
                    "witness": vanishes and distinct and any(coefs)})
    return out
