import math

import pytest
from hypothesis import given, strategies as st

from conftest import small_rationals
from ucpt_lab.channels import FamilySpec, build_family, shift
from ucpt_lab.errors import ExplicitTooLarge, PreconditionFailed
from ucpt_lab.extremality import (band_width, check_banded_dependence, combination, extremality_verdict,
                                  gram_det_poly, independence, product_set, rotation_blocks, set_independence,
                                  vec_det_poly)
from ucpt_lab.field import ExScalar, mpq
from ucpt_lab.linalg import Mat


def key(d, t):
    return build_family(FamilySpec("key", d, t))


def test_key_diagonal_products():
    t = mpq(2, 5)
    K = key(3, t)
    mats, labels = product_set(K, "AstarA")
    for m in range(3):
        i = labels.index((m + 1, m + 1))
        assert mats[i] == Mat.identity(3) - Mat.unit(3, m, m).scale(1 - t * t)


def test_unitary_family_diagonal_subset_dependent():
    K = key(3, 1)
    mats, labels = product_set(K, "AstarA")
    diag = [m for m, lab in zip(mats, labels) if lab[0] == lab[1]]
    assert all(m == Mat.identity(3) for m in diag)
    assert not independence(diag).independent


def test_alpha_beta_mixed_product_has_two_monomials():
    K = build_family(FamilySpec("ucpt_alpha_beta", alpha=mpq(3, 5), beta=mpq(4, 5)))
    mats, labels = product_set(K, "LandauStreater")
    B12 = mats[labels.index((1, 2))]
    assert sum(1 for x in B12.entries if x) == 2


def test_key_independent_at_zero():
    v = set_independence(key(4, 0), "AstarA")
    assert v.independent and v.rank == 16 and v.witness is None


def test_key_dependent_at_special_t():
    K = key(4, mpq(-1, 3))
    v = set_independence(K, "AstarA")
    assert not v.independent and v.witness_verified
    mats, _ = product_set(K, "AstarA")
    assert combination(mats, v.witness).is_zero()
    A = K.generators
    assert ((A[0] - A[2]) @ (A[1] - A[3])).is_zero()


def test_diagonal_v_dependent():
    V = Mat.diag([1, -1, 1])
    for t in (mpq(0), mpq(1, 2)):
        K = build_family(FamilySpec("general_partial_isometry", 4, t, V_list=[V]))
        assert not set_independence(K, "AstarA").independent


def test_extremality_examples():
    ev = extremality_verdict(build_family(FamilySpec("ucpt_alpha_beta", alpha=mpq(3, 5), beta=mpq(4, 5))))
    assert (ev["ucp_extreme"], ev["cpt_extreme"], ev["ucpt_extreme_LS"]) == (False, False, True)
    ev = extremality_verdict(build_family(FamilySpec("ucpt_alpha_beta", alpha=1, beta=0)))
    assert (ev["ucp_extreme"], ev["cpt_extreme"], ev["ucpt_extreme_LS"]) == (False, False, False)
    ev = extremality_verdict(key(5, mpq(1, 3)))
    assert (ev["ucp_extreme"], ev["cpt_extreme"], ev["ucpt_extreme_LS"]) == (True, True, True)


def test_key_d3_roots_both_routes():
    g = gram_det_poly(FamilySpec("key", 3, "t"))
    v = vec_det_poly(FamilySpec("key", 3, "t"))
    assert g.roots_in_interval == v.roots_in_interval == [mpq(-1, 2)]
    assert g.exact_root_set() == v.exact_root_set() == {mpq(-1), mpq(-1, 2), mpq(1)}
    assert g.degree_ok() and v.degree_ok()


def test_key_d4_vec_roots():
    assert vec_det_poly(FamilySpec("key", 4, "t")).roots_in_interval == [mpq(-1, 3)]


def test_even_skew_identically_zero():
    assert gram_det_poly(FamilySpec("even_skew", 4, "t")).identically_zero


def test_asymmetric_roots():
    a = vec_det_poly(FamilySpec("asymmetric_w", 4, "t"), "AstarA", (-10, 10))
    b = vec_det_poly(FamilySpec("asymmetric_w", 4, "t"), "AAstar", (-10, 10))
    assert a.exact_root_set() == {mpq(1), mpq(-1), mpq(-13, 3), mpq(-59, 84), mpq(19, 21), mpq(107, 21)}
    assert b.exact_root_set() == {mpq(1), mpq(-1), mpq(-59, 84), mpq(-1, 7), mpq(19, 21), mpq(107, 21)}


def test_polynomial_size_limit():
    with pytest.raises(ExplicitTooLarge):
        gram_det_poly(FamilySpec("key", 7, "t"))


def test_band_width_examples():
    assert (band_width(Mat.diag([1, 2, 3])).beta, band_width(Mat.diag([1, 2, 3])).mu) == (0, 0)
    d = 6
    e = Mat.unit(d, d - 2, d - 1)
    assert band_width(e).beta == 1
    S = shift(d)
    assert band_width(S.adjoint() @ e @ S).beta == d - 1
    K = build_family(FamilySpec("even_skew", 8, 0))
    assert max(band_width(A).mu for A in K.generators) == 4


def test_banded_dependence():
    rep = check_banded_dependence([rotation_blocks(4)], 9, t_samples=(mpq(0), mpq(1, 3)))
    assert rep["dependent_at_all_samples"] and rep["mu_certificate"] and rep["dimension_certificate"]
    rep = check_banded_dependence([Mat.diag([1, -1, 1, 1])], 5, t_samples=(mpq(1, 2),))
    assert rep["dependent_at_all_samples"]
    with pytest.raises(PreconditionFailed):
        check_banded_dependence([rotation_blocks(2)], 5)


@given(st.integers(1, 5), st.data())
def test_verdict_invariants(k, data):
    mats = [Mat(2, 2, data.draw(st.lists(small_rationals, min_size=4, max_size=4))) for _ in range(k)]
    if data.draw(st.booleans()) and k > 1:
        mats[-1] = mats[0].scale(mpq(3, 2))
    v = independence(mats)
    assert v.independent == (v.rank == v.expected)
    assert (v.witness is None) == v.independent
    if v.witness is not None:
        assert combination(mats, v.witness).is_zero()


@given(st.integers(2, 7), st.data())
def test_band_invariants(d, data):
    ent = data.draw(st.lists(st.sampled_from([0, 0, 0, 1, -2]), min_size=d * d, max_size=d * d))
    M = Mat(d, d, [ExScalar(x) for x in ent])
    b = band_width(M)
    assert b.mu <= b.beta
    assert b.mu <= math.ceil((d - 1) / 2)
    diagonal = all(not M[i, j] for i in range(d) for j in range(d) if i != j)
    assert (b.beta == 0) == diagonal == (b.mu == 0)
