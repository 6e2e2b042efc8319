import numpy as np
import pytest

from ucpt_lab.channels import (FamilySpec, KrausSet, apply_channel, build_family, check_ucpt, choi,
                               from_generators, matrix_units, shift, shift_power)
from ucpt_lab.errors import BadDimension, BadParameters, NotUnitary
from ucpt_lab.field import ExScalar, mpq, sqrt_rational
from ucpt_lab.linalg import Mat, det_bareiss, partial_trace
from ucpt_lab.poly import T

FAMILY_CASES = [
    ("key", 3, mpq(1, 2)), ("key", 5, mpq(-1, 4)), ("odd_swap", 5, mpq(1, 3)),
    ("even_skew", 4, mpq(2, 3)), ("asymmetric_w", 4, mpq(-1, 7)),
]


def E(d, i, j):
    return Mat.unit(d, i - 1, j - 1)


def test_shift():
    S = shift(3)
    assert S @ S @ S == Mat.identity(3)
    assert S @ S.adjoint() == Mat.identity(3)
    assert S.adjoint() @ E(3, 2, 3) @ S == E(3, 3, 1)
    with pytest.raises(BadDimension):
        shift(1)


def test_key_generator_example():
    A1 = build_family(FamilySpec("key", 3, mpq(1, 2))).generators[0]
    assert A1 == Mat.from_rows([[mpq(1, 2), 0, 0], [0, 0, 1], [0, 1, 0]])


@pytest.mark.parametrize("name,d,t", FAMILY_CASES[:2] + [("key", 4, T), ("key", 6, mpq(2, 9))])
def test_partial_isometry_squares(name, d, t):
    K = build_family(FamilySpec(name, d, t))
    for m, A in enumerate(K.generators):
        want = Mat.identity(d) - Mat.unit(d, m, m).scale(1 - t * t)
        assert A.adjoint() @ A == want
        assert A @ A.adjoint() == want


def test_key_normalization():
    for d in range(3, 8):
        t = mpq(-1, d - 1)
        K = build_family(FamilySpec("key", d, t))
        assert K.norm_sq == d - 1 + t * t
        assert check_ucpt(K) == (True, True)


def test_arveson_ohno_sums():
    K = build_family(FamilySpec("arveson_ohno"))
    four = Mat.identity(3).scale(4)
    assert sum((a.adjoint() @ a for a in K.generators[1:]), K.generators[0].adjoint() @ K.generators[0]) == four
    assert check_ucpt(K) == (True, True)


def test_unitality_on_identity():
    K = build_family(FamilySpec("key", 3, mpq(1, 2)))
    assert apply_channel(K, Mat.identity(3)) == Mat.identity(3)


def test_alpha_beta_family():
    K = build_family(FamilySpec("ucpt_alpha_beta", alpha=mpq(3, 5), beta=mpq(4, 5)))
    assert check_ucpt(K) == (True, True)
    assert choi(K)[1] == 4
    with pytest.raises(BadParameters):
        build_family(FamilySpec("ucpt_alpha_beta", alpha=mpq(1, 2), beta=mpq(1, 2)))


def test_non_unitary_v_rejected():
    V = Mat.from_rows([[1, 1], [0, 1]])
    with pytest.raises(NotUnitary):
        build_family(FamilySpec("general_partial_isometry", 3, 0, V_list=[V]))


def test_choi_ranks():
    U = Mat.from_rows([[0, 1], [1, 0]])
    assert choi(from_generators([U], 1))[1] == 1
    assert choi(build_family(FamilySpec("key", 3, mpq(1, 2))))[1] == 3


def test_non_unitary_single_generator_fails_ucpt():
    K = KrausSet(2, [Mat.from_rows([[1, 1], [0, 1]])], ExScalar(1))
    assert check_ucpt(K) == (False, False)


def test_choi_trace_and_marginals():
    for name, d, t in FAMILY_CASES:
        K = build_family(FamilySpec(name, d, t))
        C, _ = choi(K)
        assert C.trace() == d
        assert partial_trace(C, (d, d), "first") == Mat.identity(d)
        assert partial_trace(C, (d, d), "second") == Mat.identity(d)


def test_odd_family_products_are_shift_powers():
    d = 5
    K = build_family(FamilySpec("odd_swap", d, mpq(1, 3)))
    V = [K.generators[m] + Mat.unit(d, m, m).scale(1 - mpq(1, 3)) for m in range(d)]
    for m in range(d):
        for n in range(d):
            assert V[m] @ V[n] == shift_power(d, 2 * (n - m))


def test_circulant_nonsingular_for_odd_d():
    for d in (3, 5, 7):
        for ell in range(1, d):
            assert det_bareiss(Mat.identity(d) + shift_power(d, -ell)) != 0


def test_d6_xy_normalization():
    K = build_family(FamilySpec("d6_xy"))
    assert check_ucpt(K) == (True, True)


def test_ohno_lowrank_backends():
    assert build_family(FamilySpec("ohno_lowrank", 4)).is_exact
    K = build_family(FamilySpec("ohno_lowrank", 9))
    assert check_ucpt(K) == (True, True)


def test_float_family_is_ucpt_within_tolerance():
    rng = np.random.default_rng(0)
    q, _ = np.linalg.qr(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
    K = build_family(FamilySpec("general_partial_isometry", 4, 0.3, V_list=[Mat.from_numpy(q)]))
    assert check_ucpt(K) == (True, True)


def test_spec_json_round_trip():
    s = FamilySpec("ucpt_alpha_beta", alpha=mpq(4, 5), beta=ExScalar.gaussian(0, mpq(3, 5)))
    assert FamilySpec.from_json(s.to_json()).to_json() == s.to_json()
    s = FamilySpec.from_json({"family": "key", "d": 4, "t": "-1/3"})
    assert build_family(s).norm_sq == mpq(28, 9)


def test_matrix_units_span():
    assert len(list(matrix_units(3))) == 9


def test_alpha_half_uses_radicals():
    r = sqrt_rational(mpq(1, 2))
    K = build_family(FamilySpec("ucpt_alpha_beta", alpha=r, beta=r))
    assert check_ucpt(K) == (True, True)
