import pytest
from hypothesis import given, strategies as st

from conftest import ex_scalars, small_rationals
from ucpt_lab.errors import NotDivisible
from ucpt_lab.field import ExScalar, mpq
from ucpt_lab.poly import T, TPoly
from ucpt_lab.roots import aberth, find_roots

polys = st.lists(small_rationals, min_size=0, max_size=6).map(TPoly.from_rationals)


def test_exact_div():
    assert (T * T - 1).exact_div(T - 1) == T + 1
    with pytest.raises(NotDivisible):
        (T * T + 1).exact_div(T - 1)


def test_eval_and_degree():
    assert (T * T - 1).eval(1) == 0
    assert ((T + 1) * (T - 1)).degree() == 2
    assert TPoly([]).degree() == -1


def test_roots_of_shifted_cubics():
    r = find_roots(T ** 3 - 3 * T + 2, (-3, 3))
    assert r.exact_roots == [(mpq(-2), 1), (mpq(1), 2)]
    r = find_roots(T ** 3 - 3 * T - 2, (-3, 3))
    assert r.exact_roots == [(mpq(-1), 2), (mpq(2), 1)]
    assert r.certified


def test_zero_polynomial_is_identically_zero():
    r = find_roots(TPoly([]), (-1, 1))
    assert r.identically_zero


def test_irrational_roots_are_numeric():
    r = find_roots((T * T - 2) * (T - mpq(1, 3)), (-2, 2))
    assert r.exact_roots == [(mpq(1, 3), 1)]
    found = sorted(z.real for z, _ in r.numeric_roots)
    assert found == pytest.approx([-2 ** 0.5, 2 ** 0.5], abs=1e-10)
    assert len(r.roots_in_interval) == 3


def test_non_rational_coefficients_are_not_certified():
    p = TPoly([ExScalar.gaussian(0, 1), 1])
    assert not find_roots(p, (-1, 1)).certified


def test_aberth_on_unit_roots():
    z, res = aberth([-1, 0, 0, 0, 1])
    assert abs(z) == pytest.approx([1.0] * 4, abs=1e-12)
    assert max(res) < 1e-12
    assert {complex(round(x.real), round(x.imag)) for x in z} == {1, -1, 1j, -1j}


@given(polys, polys, ex_scalars())
def test_eval_is_a_ring_homomorphism(p, q, x):
    assert (p * q).eval(x) == p.eval(x) * q.eval(x)
    assert (p + q).eval(x) == p.eval(x) + q.eval(x)


@given(polys, polys.filter(lambda q: not q.is_zero))
def test_divmod_reconstructs(p, q):
    a, r = p.divmod(q)
    assert a * q + r == p
    assert r.degree() < q.degree()


@given(st.lists(st.builds(lambda p, q: mpq(p, q), st.integers(-9, 9), st.integers(1, 5)), min_size=1, max_size=6),
       st.lists(small_rationals, min_size=0, max_size=3))
def test_roots_verify_exactly_and_degrees_add_up(roots, extra):
    p = TPoly.from_roots(roots) * (T * T + 1 + TPoly.from_rationals(extra) * 0)
    r = find_roots(p, (-10, 10))
    for x, _ in r.exact_roots:
        assert p.eval(x) == 0
    assert set(roots) <= r.exact_root_set()
    rest = r.remaining.degree() if r.remaining is not None else 0
    assert sum(m for _, m in r.exact_roots) + rest == p.degree()
