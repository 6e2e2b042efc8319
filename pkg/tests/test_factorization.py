import numpy as np
import pytest

from ucpt_lab.channels import FamilySpec, KrausSet, build_family, from_generators, map_table_choi
from ucpt_lab.errors import BadParameters, NotUnitary, PreconditionFailed
from ucpt_lab.factorization import (arveson_ohno_premises, block_diag_unitary, build_named_unitary,
                                    complementary_channel, composed_channel, cube_root_witness, d3_dual_unitary,
                                    d3_pair, d4_condition_check, dual_channels, extract_y_blocks,
                                    factorization_ansatz_check, kraus_choi, mub_default, normalized_generators,
                                    spectrum_predicate, ucpt_2x2_unitary, verify_exact_factorization)
from ucpt_lab.field import ExScalar, mpq, sqrt_rational
from ucpt_lab.linalg import Mat, kron, partial_trace, rank
from ucpt_lab.sampling import haar_unitary

I2 = Mat.identity(2)
SX = Mat.from_rows([[0, 1], [1, 0]])
SZ = Mat.from_rows([[1, 0], [0, -1]])
AB = FamilySpec("ucpt_alpha_beta", alpha=mpq(3, 5), beta=mpq(4, 5))


def key(d, t):
    return build_family(FamilySpec("key", d, t))


def test_block_diagonal_factorization():
    for d in (3, 4):
        for t in (1, -1):
            K = key(d, t)
            w = verify_exact_factorization(block_diag_unitary(K), K, d, "second")
            assert w.verified_unitary and w.verified_channel and w.max_residual == 0


def test_alpha_beta_unitary_nu_2():
    K = build_family(AB)
    w = verify_exact_factorization(ucpt_2x2_unitary(K), K, 2)
    assert w.verified_channel


def test_non_unitary_rejected():
    U = kron(Mat.from_rows([[1, 1], [0, 1]]), I2)
    with pytest.raises(NotUnitary):
        verify_exact_factorization(U, key(4, 1), 1)
    with pytest.raises(NotUnitary):
        dual_channels(U, 2, 2)


def test_d3_dual_pair_and_exchange():
    phi, psi = d3_pair()
    U, W = d3_dual_unitary("U"), d3_dual_unitary("W")
    assert verify_exact_factorization(U, phi, 3, "second").verified_channel
    assert verify_exact_factorization(U, psi, 3, "first").verified_channel
    assert verify_exact_factorization(W, psi, 3, "second").verified_channel
    assert verify_exact_factorization(W, phi, 3, "first").verified_channel
    a, b = dual_channels(U, 3, 3)
    c, d = dual_channels(W, 3, 3)
    assert (a, b) == (d, c)


def test_choi4_square():
    for K in (key(4, 0), key(4, mpq(1, 2)), build_family(FamilySpec("arveson_ohno"))):
        U = build_named_unitary("choi4_square", K)
        w = verify_exact_factorization(U, composed_channel(K), 4)
        assert w.verified_unitary and w.verified_channel
    with pytest.raises(BadParameters):
        build_named_unitary("choi4_square", key(5, 0))
    with pytest.raises(BadParameters):
        build_named_unitary("ucpt_2x2", key(3, 0))


def test_dual_of_diagonal_controlled_unitary_is_schur_restriction():
    U = kron(I2, Mat.unit(2, 0, 0)) + kron(SZ, Mat.unit(2, 1, 1))
    _, psi = dual_channels(U, 2, 2)
    assert psi == map_table_choi(lambda g: Mat.diag([g[0, 0], g[1, 1]]), 2)


def test_self_dual_channel():
    i = ExScalar.gaussian(0, 1)
    U = (kron(SX, SZ) + kron(SZ, SX).scale(i)).scale(sqrt_rational(mpq(1, 2)))
    phi, psi = dual_channels(U, 2, 2)
    want = kraus_choi(from_generators([SX, SZ], 2))
    assert phi == psi == want


def test_dual_channels_are_ucpt():
    U = ucpt_2x2_unitary(build_family(AB))
    phi, psi = dual_channels(U, 3, 2)
    assert phi == kraus_choi(build_family(AB))
    for C, n in ((phi, 3), (psi, 2)):
        assert partial_trace(C, (n, n), "first") == Mat.identity(n)
        assert partial_trace(C, (n, n), "second") == Mat.identity(n)


def test_dual_of_block_diagonal_at_minus_one_is_kraus_form():
    K = key(4, -1)
    phi, _ = dual_channels(block_diag_unitary(K), 4, 4)
    assert phi == kraus_choi(K)


def test_complementary_channel():
    C = complementary_channel(from_generators([SX], 1))
    assert C == Mat.identity(2)
    C = complementary_channel(build_family(AB))
    assert partial_trace(C, (3, 4), "second") == Mat.identity(3)
    assert rank(complementary_channel(key(3, mpq(1, 2)))) == 3


def test_d4_condition_examples():
    r = d4_condition_check([Mat.identity(4)] * 4)
    assert not r["Q_plus_3cycle"]
    m = d4_condition_check(mub_default())
    assert m["unitary"] and m["orthonormal"]
    assert m["Q_plus_pairs_equal"] and m["R_plus_pairs_equal"]
    assert not m["Q_minus_3cycle"] and not m["R_minus_3cycle"]
    assert d4_condition_check(cube_root_witness())["spectrum_predicate"]
    g = d4_condition_check(mub_default(), "general_M")
    assert g["M_independent_of_j"] and g["M_positive_definite"]


def test_spectrum_predicate_never_holds_for_nu_4():
    rng = np.random.default_rng(5)
    for _ in range(20):
        assert not spectrum_predicate(haar_unitary(4, rng))
    w = cube_root_witness()[2]
    assert spectrum_predicate(w) and spectrum_predicate(kron(w, Mat.identity(2)))


def test_float_condition_check():
    U = [u.to_float() for u in mub_default()]
    r = d4_condition_check(U)
    assert not r["exact"] and r["Q_plus_pairs_equal"]


def test_ansatz_single_unitary():
    r = factorization_ansatz_check([SX], [Mat.identity(1)])
    assert r["all"]


def test_ansatz_alpha_beta_blocks():
    K = build_family(AB)
    A = normalized_generators(K)
    Y = extract_y_blocks(ucpt_2x2_unitary(K), A, 2)
    assert factorization_ansatz_check(A, Y)["all"]


def test_ansatz_arveson_ohno_fails():
    A = normalized_generators(build_family(FamilySpec("arveson_ohno")))
    rng = np.random.default_rng(3)
    for _ in range(5):
        Y = [haar_unitary(3, rng) for _ in range(4)]
        assert not factorization_ansatz_check(A, Y)["all"]


def test_ansatz_dependent_list():
    with pytest.raises(PreconditionFailed):
        factorization_ansatz_check([SX, SX], [I2, I2])


def test_arveson_ohno_premises():
    p = arveson_ohno_premises()
    assert p["all"]
    assert p["exceptional_value"] != 0
    assert p["e3_AstarA_e2"]["pass"] and p["diagonal_offdiag_vanish"]["pass"]


def test_composed_channel_normalization():
    K = key(4, mpq(1, 2))
    C = composed_channel(K)
    assert C.norm_sq == K.norm_sq ** 2 and len(C) == 16
    assert isinstance(C, KrausSet)
