from itertools import combinations

import pytest

from ucpt_lab.channels import FamilySpec, build_family
from ucpt_lab.errors import BadCase, BadDimension, BadIndices, PreconditionFailed
from ucpt_lab.extremality import independence
from ucpt_lab.field import ExScalar, mpq
from ucpt_lab.linalg import Mat
from ucpt_lab.omega import (CASES, build_omega, case_multiplicity, d3_relations, eigenbasis, omega_det, p_d,
                            spectrum_claims, spectrum_exhaustive, special_t_relations, verify_spectrum, w_minus,
                            w_plus, x_pattern, xmn_transform)
from ucpt_lab.poly import T

SAMPLE_T = [mpq(p, q) for p, q in ((0, 1), (1, 2), (-1, 2), (2, 3), (-2, 3), (1, 5), (-3, 5), (4, 5), (-4, 5),
                                   (1, 7), (-5, 7), (2, 9), (7, 9), (-7, 9), (3, 11), (-9, 11), (5, 13), (-2, 13),
                                   (1, 4), (1, 3))]


def key(d, t):
    return build_family(FamilySpec("key", d, t))


def test_weights_table():
    assert (w_plus(5, -1), w_plus(5, 1), w_minus(5, -1), w_minus(5, 1)) == (5, 1, 1, -3)
    for d in range(4, 9):
        t = mpq(-1, d - 1)
        assert w_plus(d, t) == w_minus(d, t) == 2
    assert w_minus(5, mpq(1, 2)) is None


def test_p_d_vanishes_only_at_special_t():
    for d in range(3, 8):
        assert p_d(d, mpq(-1, d - 1)) == 0
        assert p_d(d, 0) != 0


def test_xmn_pattern_and_bad_indices():
    for d in (4, 5):
        for t in (mpq(1, 3), mpq(-1, d - 1), mpq(d - 3, d - 1)):
            K = key(d, t)
            for m, n in ((1, 2), (2, 4), (3, 1)):
                assert xmn_transform(K, m, n)["matches_pattern"]
    with pytest.raises(BadIndices):
        xmn_transform(key(4, 0), 2, 2)


def test_x_pattern_off_diagonal_entries():
    X = x_pattern(5, 2, 4, "-", ExScalar(7))
    assert X[1, 3] == 7 and X[3, 1] == -7
    others = [X[i, j] for i in range(5) for j in range(5) if {i, j} != {1, 3}]
    assert set(others) <= {ExScalar(0), ExScalar(1), ExScalar(-1)}


def test_omega_shift_is_x_identity():
    for d in (3, 4, 6):
        for s in ("+", "-"):
            n = d * (d - 1) // 2
            assert build_omega(d, s, 5).matrix - build_omega(d, s, 0).matrix == Mat.identity(n).scale(5)
            assert build_omega(d, s, T).matrix.eval(mpq(2, 3)) == build_omega(d, s, mpq(2, 3)).matrix


def test_omega_d3_determinants():
    assert omega_det(3, "+") == T ** 3 - 3 * T + 2
    assert omega_det(3, "-") == T ** 3 - 3 * T - 2


@pytest.mark.parametrize("d,sign,want", [
    (4, "-", {2: 3, -2: 3}),
    (5, "+", {6: 1, 1: 4, -2: 5}),
    (3, "+", {2: 1, -1: 2}),
])
def test_spectrum_examples(d, sign, want):
    got = {int(c.eigenvalue.rational()): m for c, m, ok in verify_spectrum(d, sign) if m}
    assert got == want
    assert all(ok for _, _, ok in verify_spectrum(d, sign))


def test_spectrum_all_dimensions():
    for d in range(3, 9):
        for s in ("+", "-"):
            assert spectrum_exhaustive(d, s)
            assert all(ok for _, _, ok in verify_spectrum(d, s))
    with pytest.raises(BadDimension):
        verify_spectrum(9, "+")


def test_eigenbasis_examples():
    C = eigenbasis(5, "skew_2_minus_d")
    assert len(C) == 4
    sk = eigenbasis(4, "skew_2")
    assert len(sk) == 3
    assert len(eigenbasis(5, "sym_2")) == 5
    with pytest.raises(BadCase):
        eigenbasis(5, "nope")


def test_eigenbasis_sizes_match_multiplicities():
    for d in (4, 5, 6):
        for case in CASES:
            basis = eigenbasis(d, case)
            assert len(basis) == case_multiplicity(d, case)
            if basis:
                assert independence(basis).independent


@pytest.mark.parametrize("d", [4, 5])
def test_omega_criterion_matches_direct_independence(d):
    eig = {s: {c.eigenvalue for c in spectrum_claims(d, s)} for s in ("+", "-")}
    for t in SAMPLE_T:
        if t in (mpq(-1, d - 1), mpq(d - 3, d - 1)):
            continue
        K = key(d, t)
        ws = {"+": w_plus(d, t), "-": w_minus(d, t)}
        verdict = {}
        for s, field in (("+", "X_plus"), ("-", "X_minus")):
            X = [xmn_transform(K, m, n)[field] for m, n in combinations(range(1, d + 1), 2)]
            verdict[s] = independence(X).independent
            assert verdict[s] == (-ws[s] not in eig[s])
        A = K.generators
        direct = independence([a @ b for a in A for b in A]).independent
        assert direct == (verdict["+"] and verdict["-"])


def test_special_t_relations_d4():
    rep = special_t_relations(4)
    assert rep.all_hold
    assert rep.facts["span_dimension"] == 10
    A = key(4, mpq(-1, 3)).generators
    assert ((A[0] - A[2]) @ (A[1] - A[3])).is_zero()


def test_special_t_relations_constant_d5():
    rep = special_t_relations(5)
    assert rep.get("sum_offdiag_scalar")["holds"]
    A = key(5, mpq(-1, 4)).generators
    S = Mat.zeros(5)
    for m in range(5):
        for n in range(5):
            if m != n:
                S = S + A[m] @ A[n]
    assert S == Mat.identity(5).scale(rep.facts["sum_offdiag_constant"])


def test_special_t_wrong_t():
    with pytest.raises(PreconditionFailed):
        special_t_relations(4, mpq(1, 2))


def test_d3_relations():
    rep = d3_relations()
    assert rep.all_hold
    A = key(3, mpq(-1, 2)).generators
    assert (A[0] @ A[1] + A[1] @ A[2] + A[2] @ A[0]).is_zero()
    total = Mat.zeros(3)
    for m, n in combinations(range(3), 2):
        total = total + A[m] @ A[n] + A[n] @ A[m]
    assert total.is_zero()
    B = key(3, 1).generators
    assert B[0] @ B[1] == Mat.from_rows([[0, 0, 1], [1, 0, 0], [0, 1, 0]])
