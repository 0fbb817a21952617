import random

from hypothesis import given, strategies as st

from npb.actions import check_action
from npb.algebra import Variety, classify
from npb.exactlin import FieldSpec, rank
from npb.samples import (SampleConfig, random_instance, random_invertible, random_term,
                         search_derivation_witness)
from npb.terms import term_str


def _degree(t):
    return 1 if isinstance(t, str) else _degree(t[1]) + _degree(t[2])


def test_random_instance_is_deterministic():
    a = random_instance("nplr", "Q", 11)
    b = random_instance("nplr", "Q", 11)
    assert a.algebra == b.algebra and a.dotL == b.dotL and a.brR == b.brR


@given(st.sampled_from(["npl", "npr", "nplr", "awbl", "awbr", "awblr"]), st.integers(0, 300),
       st.sampled_from(["Q", "F2", "F3"]))
def test_random_instance_lands_in_variety(variety, seed, field):
    cfg = SampleConfig(max_dim_P=2, max_dim_M=2)
    R = random_instance(variety, field, seed, cfg)
    assert Variety.parse(variety) in classify(R.algebra)
    assert check_action(variety, R)
    assert 1 <= R.algebra.dim <= 2 and 1 <= R.module_dim <= 2


@given(st.integers(0, 10 ** 6), st.sampled_from(["Q", "F2", "F5"]), st.integers(1, 5))
def test_random_invertible(seed, field, n):
    F = FieldSpec.parse(field)
    assert rank(random_invertible(F, n, random.Random(seed))) == n


@given(st.integers(0, 10 ** 6), st.integers(1, 7))
def test_random_term_degree(seed, d):
    t = random_term(random.Random(seed), ("x", "y"), d)
    assert 1 <= _degree(t) <= d
    assert set(term_str(t)) <= set("xy*[],")


def test_linear_derivation_witness_exists():
    hit = search_derivation_witness("F2", "left", False, ["awbl"], ["npl"], max_dim=2)
    assert hit is not None
    A, D, B = hit
    tags = classify(B)
    assert Variety.AWBL in tags and Variety.NPL not in tags
