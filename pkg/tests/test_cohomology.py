import random

import pytest
from hypothesis import given, strategies as st

from npb.actions import Representation, derivations
from npb.algebra import BiAlgebra, Variety, upper_triangular
from npb.cohomology import (VARIETY_KEY, CochainContext, Complex, build_complex,
                            chain_map_failures, cohomology_dims, cohomology_table,
                            hochschild_coboundary, leibniz_coboundary, me_module,
                            restricted_h2, variety_maps)
from npb.errors import ActionAxiomsFail, GuardExceeded, VarietyMismatch
from npb.exactlin import Matrix, rank
from npb.samples import random_instance

SIX = [v.value.lower() for v in VARIETY_KEY]


def test_hochschild_degree_one_by_hand():
    E = BiAlgebra.make("Q", [[[1]]])
    R = Representation.regular(E).abelian()
    d1 = hochschild_coboundary(E, R, 1)
    assert d1.to_dense() == [[1]]          # e.f(e) - f(e.e) + f(e).e = e for f = id


def test_zero_actions_zero_dot():
    Z = BiAlgebra.zero("Q", 2)
    R = Representation.zero(Z, 2)
    for n in range(4):
        assert hochschild_coboundary(Z, R, n).is_zero()
        assert leibniz_coboundary(Z, R, n).is_zero()


@given(st.integers(0, 10 ** 6), st.sampled_from(["Q", "F3"]))
def test_leibniz_degree_one_formula(seed, field):
    R = random_instance("nplr", field, seed % 400)
    P, m, p = R.algebra, R.module_dim, R.algebra.dim
    F = P.field
    rng = random.Random(seed)
    f = [F.norm(rng.randint(-2, 2)) for _ in range(p * m)]
    out = leibniz_coboundary(P, R, 1).apply(f)
    fm = lambda i: f[i * m:(i + 1) * m]
    for i in range(p):
        for j in range(p):
            want = [a + b for a, b in zip(R.brL[i].apply(fm(j)), R.brR[j].apply(fm(i)))]
            br = P.bracket[i][j]
            for t in range(p):
                want = [w - br[t] * x for w, x in zip(want, fm(t))]
            assert out[(i * p + j) * m:(i * p + j + 1) * m] == [F.norm(w) for w in want]


@given(st.sampled_from(SIX), st.integers(0, 400), st.sampled_from(["Q", "F2"]))
def test_dd_zero(variety, seed, field):
    R = random_instance(variety, field, seed)
    assert build_complex(variety, R, 4).check() == []


def test_me_module():
    R = random_instance("nplr", "Q", 3)
    me = me_module(R)
    assert me.dim == R.algebra.dim * R.module_dim
    Z = Representation.zero(R.algebra, 2)
    assert all(M.is_zero() for M in me_module(Z).left + me_module(Z).right)


def test_theta_prime_transposes():
    R = random_instance("nplr", "Q", 5, dim_P=2, dim_M=1)
    ctx = CochainContext(R)
    p, m = 2, 1
    T = ctx.theta_prime(1)
    for a in range(p):
        for b in range(p):
            f = [0] * (p * p * m)
            f[(a * p + b) * m] = 1                # f(e_a, e_b) = m_0
            g = T.apply(f)
            # theta'(f)(p1)(p2) = f(p2, p1): nonzero at p1 = b, q = a
            assert g[b * p * m + a * m] == 1 and sum(g) == 1


@pytest.mark.parametrize("n", range(1, 5))
def test_theta_full_rank(n):
    ctx = CochainContext(random_instance("npl", "F2", 7, dim_P=2, dim_M=2))
    assert rank(ctx.theta(n)) == ctx.dim_H(n + 1)
    assert rank(ctx.theta_prime(n)) == ctx.dim_H(n + 1)


def test_alpha_beta_without_brackets():
    Z = BiAlgebra.make("Q", [[[1]]])
    ctx = CochainContext(Representation.zero(Z, 1))
    for n in range(1, 5):
        assert ctx.alpha(n).is_zero()
        # odd beta runs through the Leibniz coboundary; even beta is the Hochschild one
        assert ctx.beta(n).is_zero() == (n % 2 == 1)


@pytest.mark.parametrize("seed", range(20))
def test_alpha_one_is_beta_one(seed):
    ctx = CochainContext(random_instance("npl", "Q", seed))
    assert ctx.alpha(1) == ctx.beta(1)
    ctx = CochainContext(random_instance("npr", "F2", seed))
    assert ctx.alpha_prime(1) == ctx.beta_prime(1)


@pytest.mark.parametrize("variety", SIX)
def test_chain_maps(variety):
    for seed in range(5):
        ctx = CochainContext(random_instance(variety, "Q", seed))
        for name in variety_maps(variety):
            assert chain_map_failures(ctx, name, 4) == []


def test_nplr_degree_two_dimension():
    R = random_instance("nplr", "F2", 2, dim_P=3, dim_M=2)
    c = build_complex("nplr", R, 2)
    m, p = 2, 3
    assert c.dim(2) == m * p * p + 2 * (m * p) * p + m * p * p


@pytest.mark.parametrize("variety", SIX)
def test_zero_algebra_cohomology_is_cochains(variety):
    R = Representation.zero(BiAlgebra.zero("Q", 2), 1)
    c = build_complex(variety, R, 3)
    assert all(D.is_zero() for D in c.d)
    assert cohomology_dims(c, 3) == [c.dim(n) for n in range(4)]


@pytest.mark.parametrize("variety", SIX)
def test_low_degrees(variety):
    for seed in range(8):
        R = random_instance(variety, "F2" if seed % 2 else "Q", seed)
        dims = cohomology_dims(build_complex(variety, R, 1), 1)
        assert dims[0] == 0 and dims[1] == derivations(variety, R).dim


def test_restricted_h2_bounds():
    for seed in range(6):
        for v in ("npl", "npr", "nplr"):
            R = random_instance(v, "F2", seed)
            h = cohomology_dims(build_complex(v, R, 2), 2)[2]
            assert 0 <= restricted_h2(v, R) <= h
    R = Representation.zero(BiAlgebra.zero("Q", 2), 1)
    assert restricted_h2("nplr", R) == 2 * 1 * 2 * 2


def test_standard_sign_same_dimensions():
    for v in SIX:
        R = random_instance(v, "Q", 1)
        a = cohomology_dims(CochainContext(R).complex(VARIETY_KEY[Variety.parse(v)], 4), 3)
        b = cohomology_dims(CochainContext(R, sign="standard").complex(VARIETY_KEY[Variety.parse(v)], 4), 3)
        assert a == b


def test_errors():
    P = BiAlgebra.make("Q", [[[1]]], [[[1]]])            # bracket not Leibniz
    with pytest.raises(VarietyMismatch):
        build_complex("npl", Representation.zero(P, 1), 2)
    U = upper_triangular()
    R = Representation.regular(U).abelian()
    bad = Representation(U, 3, R.dotL, R.dotR, R.brL,
                         tuple(M.scale(2) for M in R.brR))
    with pytest.raises(ActionAxiomsFail):
        build_complex("nplr", bad, 2)


def test_guard(monkeypatch):
    monkeypatch.setenv("NPB_GUARD_DIM", "cochains=50")
    with pytest.raises(GuardExceeded):
        build_complex("nplr", random_instance("nplr", "F2", 0, dim_P=3, dim_M=2), 4)


def test_corrupted_differential_detected():
    c = build_complex("npl", random_instance("npl", "Q", 4, dim_P=2, dim_M=1), 3)
    d = list(c.d)
    D = d[1]
    flip = Matrix.from_entries(D.field, D.nrows, D.ncols, [(0, 0, 1)])
    d[1] = D + flip
    bad = Complex(c.label, c.field, c.spaces, d, c.layout)
    assert bad.check() and set(bad.check()) <= {0, 1}


def test_table_rows():
    R = random_instance("nplr", "Q", 2)
    rows = cohomology_table("nplr", R, 3)
    assert rows[0]["variety"] == "NPlr" and "restricted_h2" in rows[0]
    assert [r["n"] for r in rows[1:]] == [0, 1, 2, 3]
