import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import ex_scalars, small_rationals
from ucpt_lab.channels import FamilySpec, build_family, choi
from ucpt_lab.errors import ExplicitTooLarge, NotHermitian, ShapeError
from ucpt_lab.extremality import product_set
from ucpt_lab.field import ExScalar, mpq
from ucpt_lab.linalg import (Mat, cofactor_det, det_bareiss, float_rank, gram, hermitian_eig, hs_inner, kron,
                             partial_trace, rank, rank_nullspace, matvec)
from ucpt_lab.poly import T


def rational_mats(n, m=None):
    m = n if m is None else m
    return st.lists(small_rationals, min_size=n * m, max_size=n * m).map(lambda e: Mat(n, m, e))


def exact_mats(n):
    return st.lists(ex_scalars(), min_size=n * n, max_size=n * n).map(lambda e: Mat(n, n, e))


def test_kron_of_identities():
    assert kron(Mat.identity(2), Mat.identity(3)) == Mat.identity(6)


def test_hs_inner_of_matrix_unit():
    e = Mat.unit(2, 0, 1)
    assert hs_inner(e, e) == 1


def test_shape_mismatch():
    with pytest.raises(ShapeError):
        Mat.identity(2) @ Mat.identity(3)
    with pytest.raises(ShapeError):
        Mat.identity(2) + Mat.identity(3)


@given(exact_mats(2), exact_mats(2))
def test_trace_of_kron_factorizes(a, b):
    assert kron(a, b).trace() == a.trace() * b.trace()


@given(exact_mats(3), exact_mats(3))
def test_adjoint_and_trace_cyclicity(a, b):
    assert a.adjoint().adjoint() == a
    assert (a @ b).trace() == (b @ a).trace()


def test_rank_of_ones_and_identity():
    r, basis = rank_nullspace(Mat(3, 3, [1] * 9))
    assert r == 1 and len(basis) == 2
    r, basis = rank_nullspace(Mat.identity(5))
    assert r == 5 and basis == []


def test_nullspace_vectors_are_null():
    M = Mat.from_rows([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    r, basis = rank_nullspace(M)
    assert r == 2
    for v in basis:
        assert not any(matvec(M, v))


def test_landau_streater_gram_rank_deficient_at_alpha_one():
    K = build_family(FamilySpec("ucpt_alpha_beta", alpha=1, beta=0))
    mats, _ = product_set(K, "LandauStreater")
    assert rank(gram(mats)) < 16


def test_determinants():
    assert det_bareiss(Mat.from_rows([[1, 2], [3, 4]])) == -2
    assert det_bareiss(Mat.from_rows([[T, 1], [1, T]])) == T * T - 1


def test_polynomial_determinant_size_limit():
    n = 37
    with pytest.raises(ExplicitTooLarge):
        det_bareiss(Mat.identity(n).to_poly())


@given(rational_mats(4))
def test_bareiss_matches_cofactor(m):
    assert det_bareiss(m) == cofactor_det(m)


@given(exact_mats(3))
def test_nonzero_det_iff_full_rank(m):
    assert bool(det_bareiss(m)) == (rank(m) == 3)


def test_partial_traces():
    rho = Mat.from_rows([[1, 2], [3, 4]])
    sigma = Mat.from_rows([[5, 1, 0], [0, 2, 1], [1, 1, 3]])
    assert partial_trace(kron(rho, sigma), (2, 3), "second") == rho.scale(10)
    assert partial_trace(kron(rho, sigma), (2, 3), "first") == sigma.scale(5)
    assert partial_trace(Mat.identity(6), (2, 3), "first") == Mat.identity(3).scale(2)
    with pytest.raises(ShapeError):
        partial_trace(Mat.identity(5), (2, 3), "first")


@given(rational_mats(6), rational_mats(6), small_rationals)
def test_partial_trace_is_linear_and_trace_preserving(a, b, c):
    for side in ("first", "second"):
        pa = partial_trace(a, (2, 3), side)
        assert partial_trace(a + b.scale(c), (2, 3), side) == pa + partial_trace(b, (2, 3), side).scale(c)
        assert pa.trace() == a.trace()


def test_choi_marginals_are_maximally_mixed():
    K = build_family(FamilySpec("key", 3, mpq(1, 2)))
    C, _ = choi(K)
    assert partial_trace(C, (3, 3), "first") == Mat.identity(3)
    assert partial_trace(C, (3, 3), "second") == Mat.identity(3)


def test_hermitian_eig_examples():
    w, _ = hermitian_eig(Mat.diag([3.0, 1.0, 2.0]))
    assert np.allclose(w, [3, 2, 1])
    w, _ = hermitian_eig(Mat.from_numpy([[0, 1], [1, 0]]))
    assert np.allclose(w, [1, -1])
    with pytest.raises(NotHermitian):
        hermitian_eig(Mat.from_numpy([[0, 1], [0, 0]]))


def test_arveson_ohno_choi_spectrum():
    C, _ = choi(build_family(FamilySpec("arveson_ohno")))
    w, _ = hermitian_eig(C.to_float().scale(1 / 3))
    assert np.allclose(w[:4], [5 / 12, 1 / 4, 1 / 4, 1 / 12], atol=1e-9)
    assert np.allclose(w[4:], 0, atol=1e-9)


@given(st.integers(0, 2 ** 32 - 1), st.integers(2, 12))
def test_hermitian_eig_invariants(seed, n):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    h = a + a.conj().T
    w, V = hermitian_eig(Mat.from_numpy(h))
    v = V.to_numpy()
    assert abs(w.sum() - np.trace(h).real) < 1e-9 * max(1, np.abs(h).max())
    assert np.allclose(v.conj().T @ v, np.eye(n), atol=1e-9)
    assert np.allclose(h @ v, v * w, atol=1e-9 * max(1, np.abs(h).max()))
    assert np.all(np.diff(w) <= 1e-12)


def test_float_rank_examples():
    assert float_rank(Mat.identity(4).to_float()) == 4
    assert float_rank(Mat.from_numpy(np.ones((4, 4)))) == 1


def test_float_rank_matches_exact_rank_on_key_family():
    K = build_family(FamilySpec("key", 4, 0))
    mats, _ = product_set(K, "AstarA")
    G = gram(mats)
    assert float_rank(G.to_float(), hermitian_psd=True) == rank(G) == 16
