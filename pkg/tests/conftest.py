from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from bilinear_growth.catalog import golden, plus_one
from bilinear_growth.core import BilinearMap, BilinearSystem

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

small_nonneg = st.sampled_from([0, 0, 1, 2, Fraction(1, 2), 3])


@st.composite
def nonneg_systems(draw, max_dim=3, max_seeds=1, max_ops=1):
    d = draw(st.integers(1, max_dim))
    n_ops = draw(st.integers(1, max_ops))
    n_seeds = draw(st.integers(1, max_seeds))
    ops = []
    for _ in range(n_ops):
        keys = draw(st.lists(st.tuples(*[st.integers(0, d - 1)] * 3), max_size=2 * d, unique=True))
        ops.append(BilinearMap(d, {k: draw(st.sampled_from([1, 2, Fraction(1, 2), 3])) for k in keys}))
    seeds = [tuple(draw(small_nonneg) for _ in range(d)) for _ in range(n_seeds)]
    return BilinearSystem(d, tuple(ops), tuple(seeds))


@st.composite
def nonneg_matrices(draw, d=None, max_dim=4, values=small_nonneg):
    d = d or draw(st.integers(1, max_dim))
    return tuple(tuple(draw(values) for _ in range(d)) for _ in range(d))


@pytest.fixture
def gold():
    return golden()


@pytest.fixture
def plus():
    return plus_one()


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
