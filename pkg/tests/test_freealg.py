import random

import pytest
from hypothesis import given, strategies as st

from npb.algebra import BiAlgebra, Variety, classify, upper_triangular
from npb.errors import VarietyMismatch
from npb.exactlin import Matrix, rank
from npb.freealg import (dependence_witnesses, enumerate_basis, extend_map, free_algebra,
                         free_bracket, free_dot, interpret, normalize, truncated_free_algebra,
                         underlying_free_basis_report)
from npb.samples import random_term
from npb.terms import BR, DOT, parse_term, term_str

SIX = ["npl", "npr", "nplr", "awbl", "awbr", "awblr"]


def test_basis_small_degrees():
    assert [str(w) for w in enumerate_basis("nplr", ["x"], 1)] == ["x"]
    assert sorted(str(w) for w in enumerate_basis("nplr", ["x"], 2)) == ["[x,x]", "x*x"]
    assert sorted(str(w) for w in enumerate_basis("nplr", ["x"], 3)) == sorted(
        ["x*x*x", "x*[x,x]", "[x,x]*x", "[[x,x],x]"])


@pytest.mark.parametrize("variety,counts", [
    ("npl", [1, 2, 5, 14, 42]), ("npr", [1, 2, 5, 13, 32]), ("nplr", [1, 2, 4, 7, 11]),
    ("awbl", [1, 2, 6, 22, 90]), ("awbr", [1, 2, 6, 22, 90]), ("awblr", [1, 2, 5, 14, 40])])
def test_one_generator_counts(variety, counts):
    assert [len(enumerate_basis(variety, ["x"], n)) for n in range(1, 6)] == counts


def _all_terms(gens, n):
    if n == 1:
        return list(gens)
    return [(op, a, b) for k in range(1, n) for a in _all_terms(gens, k)
            for b in _all_terms(gens, n - k) for op in (DOT, BR)]


@pytest.mark.parametrize("variety", SIX)
def test_normal_forms_of_all_terms_span_basis(variety):
    A = free_algebra(variety, ("x",))
    for n in range(1, 5):
        ids = A.basis_ids(n)
        pos = {w: i for i, w in enumerate(ids)}
        cols = []
        for t in _all_terms(("x",), n):
            v = [0] * len(ids)
            for w, c in A.normalize(t).terms:
                v[pos[w]] = c
            cols.append(v)
        assert rank(Matrix.from_columns(A.field, len(ids), cols)) == len(ids)


def test_rewrite_examples():
    assert str(normalize("nplr", "x")) == "x"
    lhs = normalize("nplr", "[x*y,z]", ["x", "y", "z"])
    A = free_algebra("nplr", ("x", "y", "z"))
    x, y, z = (A.generator(g) for g in "xyz")
    assert lhs == free_dot(x, free_bracket(y, z)) + free_dot(free_bracket(x, z), y)
    lhs = normalize("nplr", "[x,[y,z]]", ["x", "y", "z"])
    assert lhs == free_bracket(free_bracket(x, y), z) - free_bracket(free_bracket(x, z), y)


def test_free_products():
    A = free_algebra("npr", ("x", "y", "z"))
    x, y, z = (A.generator(g) for g in "xyz")
    zero = x.scale(0)
    assert free_dot(x, zero).is_zero()
    assert free_bracket(x, free_dot(x, y)) == free_dot(x, free_bracket(x, y)) + \
        free_dot(free_bracket(x, x), y)
    assert free_dot(free_dot(x, y), z) == free_dot(x, free_dot(y, z))


def test_extend_map_trivial_cases():
    U = upper_triangular()
    A = free_algebra("nplr", ("x", "y"))
    ev = extend_map("nplr", {"x": [0, 0, 0], "y": [0, 0, 0]}, U, A)
    assert ev(A.normalize("x*[x,y]")) == (0, 0, 0)
    Z = BiAlgebra.zero("Q", 2)
    ev = extend_map("nplr", {"x": [1, 0], "y": [0, 1]}, Z, A)
    assert ev(A.normalize("x*y")) == (0, 0)
    assert ev(A.normalize("y")) == (0, 1)


def test_extend_map_rejects_wrong_variety():
    P = BiAlgebra.make("Q", [[[1]]], [[[1]]])
    assert Variety.NPLR not in classify(P)
    with pytest.raises(VarietyMismatch):
        extend_map("nplr", {"x": [1]}, P)


@given(st.integers(0, 10 ** 6))
def test_universal_property_upper_triangular(seed):
    rng = random.Random(seed)
    U = upper_triangular()
    A = free_algebra("nplr", ("x", "y"))
    phi = {g: [rng.randint(-2, 2) for _ in range(3)] for g in "xy"}
    ev = extend_map("nplr", phi, U, A)
    t = random_term(rng, ("x", "y"), 5)
    assert ev(A.normalize(t)) == interpret(t, phi, U)


@given(st.sampled_from(SIX), st.integers(0, 10 ** 6))
def test_innermost_outermost_agree(variety, seed):
    t = random_term(random.Random(seed), ("x", "y"), 6)
    A = free_algebra(variety, ("x", "y"))
    assert A.normalize(t) == A.normalize_outermost(t)


def test_truncated_free_algebra():
    T1 = truncated_free_algebra("nplr", ["x"], 1)
    assert T1.dim == 1 and classify(T1) >= {Variety.NPLR}
    T2 = truncated_free_algebra("nplr", ["x"], 2)
    assert T2.dim == 3 and set(T2.basis) == {"x", "x*x", "[x,x]"}
    x = T2.unit(T2.basis.index("x"))
    assert T2.mul_sparse(x, x) == T2.unit(T2.basis.index("x*x"))
    xx = T2.unit(T2.basis.index("x*x"))
    assert T2.mul_sparse(xx, x) == {}


def test_underlying_reports():
    assert underlying_free_basis_report("npl", ["x"], "assoc", 3)["free"]
    assert underlying_free_basis_report("npr", ["x"], "leibniz", 3)["free"]
    # degree 4 exhibits a relation among the would-be free Leibniz words of NPr
    rep = underlying_free_basis_report("npr", ["x"], "leibniz", 4)
    assert not rep["free"] and "dependence" in rep["rows"][-1]


def test_dependence_witnesses():
    w = {r["identity"]: r for r in dependence_witnesses("nplr")}
    assert w["2.2"]["witness"] and w["2.3"]["witness"]


def test_term_parser_roundtrip():
    t = parse_term("[x*y,z]*x")
    assert parse_term(term_str(t)) == t
