import pytest

from npb.actions import Representation
from npb.algebra import BiAlgebra
from npb.cohomology import CochainContext
from npb.errors import RangeTooSmall, VarietyMismatch
from npb.exactlin import Matrix
from npb.lescheck import (LES, SES, build_ses, connecting_hom, levelwise_failures,
                          verify_les, verify_levelwise_exact)
from npb.samples import random_instance


def _instance(tag, field="F2", seed=0, **kw):
    v = SES[tag].variety.value.lower()
    return random_instance(v, field, seed, dim_P=kw.get("dim_P", 2), dim_M=kw.get("dim_M", 1))


def test_tables_cover_each_other():
    assert set(LES.values()) == set(SES)
    assert len(LES) == 22


@pytest.mark.parametrize("tag", sorted(SES))
def test_levelwise_exact(tag):
    R = _instance(tag, seed=3)
    s = build_ses(tag, R, SES[tag].lo)
    assert verify_levelwise_exact(s), levelwise_failures(s)


def test_corrupted_inclusion_is_located():
    R = _instance("a1", seed=1)
    s = build_ses("a1", R, 3)
    n = 3
    M = s.inj[n]
    s.inj[n] = M + Matrix.from_entries(M.field, M.nrows, M.ncols, [(0, 0, 1)])
    fails = levelwise_failures(s)
    assert fails and {d for d, _ in fails} <= {n - 1, n}


@pytest.mark.parametrize("tag", sorted(LES))
def test_zero_algebra_every_tag_exact(tag):
    R = Representation.zero(BiAlgebra.zero("Q", 1), 1)
    rep = verify_les(tag, R, SES[LES[tag]].lo)
    assert rep.exact


def test_range_too_small():
    R = _instance("a1")
    with pytest.raises(RangeTooSmall):
        build_ses("a1", R, SES["a1"].lo - 1)


def test_variety_mismatch():
    P = BiAlgebra.make("Q", [[[1]]], [[[1]]])          # not Leibniz, so in no NP variety
    with pytest.raises(VarietyMismatch):
        build_ses("a1", Representation.zero(P, 1), 3)


def test_tag_f_dimensions_add():
    R = _instance("f", seed=5)
    s = build_ses("f", R, 3)
    for n in range(3, s.hi + 1):
        assert s.mid.dim(n) == s.left.dim(n) + s.right.dim(n)


def test_connecting_map_vanishes_without_differentials():
    R = Representation.zero(BiAlgebra.zero("F2", 1), 1)
    s = build_ses("b1", R, 3)
    for n in range(2, 4):
        assert connecting_hom(s, n).is_zero()


@pytest.mark.parametrize("seed", range(4))
def test_connecting_map_independent_of_representatives(seed):
    R = _instance("c1", "Q", seed)
    s = build_ses("c1", R, 3)
    for n in range(2, 4):
        assert connecting_hom(s, n, 0) == connecting_hom(s, n, 1)


def test_shared_context_matches_fresh():
    R = _instance("g", "F2", 2)
    ctx = CochainContext(R)
    a = verify_les("G", R, 3, ctx)
    b = verify_les("G", R, 3)
    assert a.to_json() == b.to_json() and a.exact


def test_report_output():
    R = _instance("e", "F2", 1)
    rep = verify_les("E", R, 3)
    js = rep.to_json()
    assert js["exact"] is True and js["tag"] == "E" and js["ses"] == "e"
    assert all(isinstance(k, str) for k in js["dims"]["A"])
    lines = rep.lines()
    assert lines[0].startswith("(E) from e") and lines[-1].endswith("exact")
    assert len(lines) == 2 + 3 * (3 - rep.lo + 1)
