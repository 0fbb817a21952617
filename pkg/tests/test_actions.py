import random

import pytest
from hypothesis import given, strategies as st

from npb.actions import (Representation, action_failures, ad, check_action,
                         check_crossed_module, derivations, enumerate_extensions,
                         ideal_crossed_module, induced_representation, is_derivation,
                         semidirect_product, split_extension)
from npb.algebra import BiAlgebra, Variety, classify, leibniz_xxy, upper_triangular
from npb.errors import ActionAxiomsFail, GuardExceeded, ShapeMismatch
from npb.exactlin import Matrix
from npb.samples import random_algebra, random_instance

SIX = ["npl", "npr", "nplr", "awbl", "awbr", "awblr"]


def test_regular_and_zero_representations():
    U = upper_triangular()
    assert check_action("nplr", Representation.regular(U))
    assert check_action("nplr", Representation.zero(U, 2))


def test_perturbed_regular_fails_and_names_axiom():
    U = upper_triangular()
    R = Representation.regular(U).abelian()
    mats = list(R.dotL)
    mats[0] = mats[0] + Matrix.from_entries(U.field, 3, 3, [(0, 0, 1)])
    bad = Representation(U, 3, tuple(mats), R.dotR, R.brL, R.brR)
    fails = action_failures("nplr", bad)
    assert fails and fails[0].startswith("(")
    with pytest.raises(ActionAxiomsFail):
        semidirect_product("nplr", bad)


def test_semidirect_product_examples():
    Z = BiAlgebra.zero("Q", 2)
    S = semidirect_product("nplr", Representation.zero(Z, 1))
    assert S.dim == 3 and not any(x for r in S.dot for v in r for x in v)
    E = BiAlgebra.make("Q", [[[1]]])
    S = semidirect_product("nplr", Representation.regular(E).abelian())
    assert S.dim == 2 and Variety.NPLR in classify(S)
    # (m, e)(m', e) = (m e + e m', e): both cross products equal m
    assert S.mul_sparse(S.unit(0), S.unit(1)) == S.unit(0)
    assert S.mul_sparse(S.unit(1), S.unit(0)) == S.unit(0)


def test_shape_mismatch():
    U = upper_triangular()
    with pytest.raises(ShapeMismatch):
        Representation.build(U, 2, dotL=[[[0, 0], [0, 0]]])


@given(st.sampled_from(SIX), st.integers(0, 500), st.sampled_from(["Q", "F2"]))
def test_split_extension_recovers_actions(variety, seed, field):
    R = random_instance(variety, field, seed)
    W = split_extension(variety, R)
    assert Variety.parse(variety) in classify(W.total)
    R2 = induced_representation(W, R.algebra)
    for kind in ("dotL", "dotR", "brL", "brR"):
        assert getattr(R2, kind) == getattr(R, kind)


@given(st.integers(0, 10 ** 6), st.sampled_from(["Q", "F2", "F3"]))
def test_nplr_action_is_both_sides(seed, field):
    R = random_instance("nplr", field, seed)
    for Rx in (R, Representation.regular(R.algebra).abelian()):
        assert check_action("nplr", Rx) == (check_action("npl", Rx) and check_action("npr", Rx))


def test_derivation_examples():
    Z = BiAlgebra.zero("Q", 2)
    assert derivations("nplr", Representation.zero(Z, 3)).dim == 6
    E = BiAlgebra.make("Q", [[[1]]])
    assert derivations("nplr", Representation.regular(E).abelian()).dim == 0
    L = leibniz_xxy()
    assert derivations("nplr", Representation.zero(L, 1)).dim == 1   # d(y) = 0 forced


@pytest.mark.parametrize("seed", range(20))
def test_inner_derivations(seed):
    P = random_algebra("nplr", "Q", random.Random(seed))
    R = Representation.regular(P).abelian()
    for i in range(P.dim):
        assert is_derivation(R, ad(P, P.dense(P.unit(i))))


def test_crossed_modules():
    U = upper_triangular()
    mu, R = ideal_crossed_module(U, [[0, 1, 0]])       # the ideal span{E12}
    assert check_crossed_module("nplr", mu, R)
    mu, R = ideal_crossed_module(U, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert check_crossed_module("nplr", mu, R)
    # mu = 0 into an abelian module: a crossed module exactly when M is a representation
    R0 = Representation.zero(U, 1)
    zero = Matrix.zeros(U.field, 3, 1)
    assert check_crossed_module("nplr", zero, R0)


def test_extension_counts():
    F2P = BiAlgebra.zero("F2", 1)
    R = Representation.zero(F2P, 1)
    res = enumerate_extensions(F2P, R, "nplr")
    assert res["classes"] >= 1 and res["candidates"] == 4
    with pytest.raises(ValueError):
        enumerate_extensions(BiAlgebra.zero("Q", 1), Representation.zero(BiAlgebra.zero("Q", 1), 1),
                             "nplr")


def test_extension_guard(monkeypatch):
    P = BiAlgebra.zero("F2", 3)
    with pytest.raises(GuardExceeded):
        enumerate_extensions(P, Representation.zero(P, 2), "nplr")
    monkeypatch.setenv("NPB_GUARD_DIM", "2")
    P = BiAlgebra.zero("F2", 2)
    with pytest.raises(GuardExceeded):
        enumerate_extensions(P, Representation.zero(P, 1), "nplr")
