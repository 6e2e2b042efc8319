import pytest
from hypothesis import settings, strategies as st

from ucpt_lab.field import ExScalar, mpq

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

small_rationals = st.builds(lambda p, q: mpq(p, q), st.integers(-20, 20), st.integers(1, 12))


@st.composite
def ex_scalars(draw, nonzero=False):
    x = ExScalar.from_coords([draw(small_rationals) for _ in range(8)])
    if nonzero and not x:
        x = x + 1
    return x


def pytest_collection_modifyitems(config, items):
    for item in items:
        if "acceptance" in item.nodeid:
            item.add_marker(pytest.mark.slow)
