import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from mifkit.inner_core import MifDescriptor

settings.register_profile("mifkit", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("mifkit")


@st.composite
def upper_points(draw, min_size=0, max_size=6, re=10.0, im=(0.1, 5.0)):
    n = draw(st.integers(min_size, max_size))
    us = draw(st.lists(st.floats(-re, re), min_size=n, max_size=n))
    vs = draw(st.lists(st.floats(*im), min_size=n, max_size=n))
    return np.array([complex(u, v) for u, v in zip(us, vs)], dtype=complex)


@st.composite
def descriptors(draw, max_zeros=5, max_mass=3.0):
    zeros = draw(upper_points(max_size=max_zeros))
    a = draw(st.one_of(st.just(0.0), st.floats(0.01, max_mass))) if max_mass > 0 else 0.0
    t = draw(st.floats(-np.pi, np.pi))
    return MifDescriptor(zeros, a, np.exp(1j * t))


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
