import pytest
from hypothesis import given, settings

from conftest import ex_scalars
from ucpt_lab.errors import DivideByZero
from ucpt_lab.field import I, OMEGA, ExScalar, mpq, parse_scalar, rational_text, sqrt_rational

S2, S3, S6 = sqrt_rational(2), sqrt_rational(3), sqrt_rational(6)


def test_difference_of_squares():
    assert (1 + S2) * (1 - S2) == -1


def test_gaussian_inverse():
    assert ExScalar.gaussian(1, 1).inverse() == ExScalar.gaussian(mpq(1, 2), mpq(-1, 2))


def test_multiplication_table():
    assert S2 * S3 == S6
    assert S2 * S6 == 2 * S3
    assert S3 * S6 == 3 * S2
    assert S2 * S2 == 2 and S3 * S3 == 3 and S6 * S6 == 6


def test_divide_by_zero():
    with pytest.raises(DivideByZero):
        ExScalar(1) / ExScalar(0)
    with pytest.raises(ZeroDivisionError):
        ExScalar(0).inverse()


def test_omega_is_primitive_cube_root():
    assert OMEGA ** 3 == 1
    assert 1 + OMEGA + OMEGA * OMEGA == 0
    assert OMEGA == (-1 + I * S3) / 2


def test_conj_fixes_radicals_and_negates_i():
    assert S2.conj() == S2 and S6.conj() == S6
    assert I.conj() == -I


def test_sqrt_rational_of_fractions():
    assert sqrt_rational(mpq(1, 2)) == S2 / 2
    assert sqrt_rational(mpq(2, 3)) * sqrt_rational(mpq(2, 3)) == mpq(2, 3)
    assert sqrt_rational(mpq(9, 4)) == mpq(3, 2)


def test_rational_canonical_form():
    q = mpq(6, -4)
    assert q.numerator == -3 and q.denominator == 2
    assert rational_text(mpq(0)) == "0"


def test_parse_and_json_round_trip():
    x = parse_scalar("1/2 + 3/4 i + 2 sqrt2 - sqrt6/5")
    assert x == mpq(1, 2) + mpq(3, 4) * I + 2 * S2 - S6 / 5
    assert ExScalar.from_json(x.to_json()) == x
    assert ExScalar(mpq(-1, 3)).to_json() == "-1/3"


def test_float_view():
    assert abs(complex(OMEGA) - complex(-0.5, 3 ** 0.5 / 2)) < 1e-15
    assert float(S2 + S3) == pytest.approx(2 ** 0.5 + 3 ** 0.5)


@given(ex_scalars(), ex_scalars(), ex_scalars())
@settings(max_examples=1000)
def test_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    if x:
        assert x * x.inverse() == 1


@given(ex_scalars(), ex_scalars())
def test_conj_is_multiplicative(x, y):
    assert (x * y).conj() == x.conj() * y.conj()
    assert (x + y).conj() == x.conj() + y.conj()


@given(ex_scalars())
def test_representation_is_unique(x):
    assert ExScalar.from_coords(x.c) == x
    assert hash(ExScalar.from_coords(x.c)) == hash(x)
    assert (x - x).is_zero


@given(ex_scalars())
def test_complex_embedding_is_a_homomorphism(x):
    y = x * x.conj()
    assert abs(complex(y) - abs(complex(x)) ** 2) < 1e-9 * (1 + abs(complex(x)) ** 2)
