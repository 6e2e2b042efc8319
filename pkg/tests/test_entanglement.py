import math

import pytest
from hypothesis import given, strategies as st

from ucpt_lab.channels import FamilySpec, build_family, from_generators
from ucpt_lab.decompositions import check_alpha_one, check_x_decomposition
from ucpt_lab.entanglement import alpha_beta_closed_form, binary_entropy, entropy, eof_upper_bound
from ucpt_lab.errors import BadDistribution
from ucpt_lab.field import mpq, sqrt_rational
from ucpt_lab.linalg import Mat


def ab(a2):
    a = sqrt_rational(mpq(a2))
    b = sqrt_rational(1 - mpq(a2))
    return build_family(FamilySpec("ucpt_alpha_beta", alpha=a, beta=b))


def test_entropy_examples():
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(1 / 3) == pytest.approx(0.918296, abs=1e-6)
    assert entropy([1 / 3] * 3) == pytest.approx(1.58496, abs=1e-5)
    assert entropy([1.0, 0.0]) == 0.0


def test_entropy_rejects_non_distributions():
    for bad in ([0.5, 0.6], [-0.1, 1.1], []):
        with pytest.raises(BadDistribution):
            entropy(bad)


def test_eof_examples():
    assert eof_upper_bound(ab(mpq(1, 2)))[0] == pytest.approx(0.918296, abs=1e-6)
    assert eof_upper_bound(ab(1))[0] == pytest.approx(2 / 3, abs=1e-9)
    assert eof_upper_bound(build_family(FamilySpec("arveson_ohno")))[0] == pytest.approx(0.8637, abs=5e-4)


@pytest.mark.parametrize("a2", [0, mpq(1, 4), mpq(1, 2), mpq(3, 4), 1])
def test_closed_form(a2):
    assert eof_upper_bound(ab(a2))[0] == pytest.approx(alpha_beta_closed_form(float(a2)), abs=1e-9)


def test_unitary_channel_is_maximally_entangled():
    U = Mat.from_rows([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    bound, members, orth = eof_upper_bound(from_generators([U], 1))
    assert bound == pytest.approx(math.log2(3), abs=1e-12)
    assert len(members) == 1 and orth


def test_rank_one_kraus_gives_zero():
    gens = [Mat.unit(3, 0, j) for j in range(3)]
    bound, members, orth = eof_upper_bound(from_generators(gens, 1))
    assert bound == 0 and orth


def test_bound_below_log_d_and_weights_sum_to_one():
    for K in (ab(mpq(1, 4)), build_family(FamilySpec("key", 4, mpq(1, 3))),
              build_family(FamilySpec("arveson_ohno")), build_family(FamilySpec("key", 3, 0.25))):
        bound, members, _ = eof_upper_bound(K)
        assert bound <= math.log2(K.d) + 1e-12
        assert sum(float(m.weight) for m in members) == pytest.approx(1.0, abs=1e-12)


@given(st.lists(st.floats(0, 1), min_size=1, max_size=8).filter(lambda v: sum(v) > 1e-3))
def test_entropy_bounds(v):
    p = [x / sum(v) for x in v]
    s = sum(p)
    p[0] += 1.0 - s
    if p[0] < 0:
        return
    h = entropy(p)
    assert -1e-12 <= h <= math.log2(len(p)) + 1e-12


def test_alpha_one_is_unitary_mixture():
    assert all(check_alpha_one().values())


def test_x_decomposition():
    r = check_x_decomposition()
    assert all(r.values()), r
