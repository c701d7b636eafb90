import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from regfall.fourier_core import TrigPoly

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

coef = st.floats(-3.0, 3.0, allow_nan=False, allow_infinity=False)


@st.composite
def trigpolys(draw, max_N=5, min_N=0):
    N = draw(st.integers(min_N, max_N))
    c = draw(st.lists(coef, min_size=N, max_size=N))
    s = draw(st.lists(coef, min_size=N, max_size=N))
    return TrigPoly(draw(coef), c, s)


@st.composite
def loops(draw, max_N=4):
    """Trig polynomials with a sizeable L^2 norm, valid as configuration loops."""
    f = draw(trigpolys(max_N=max_N, min_N=1))
    shift = draw(st.floats(0.5, 2.0))
    return f + shift if abs(f.constant) < 0.5 else f


def close(a, b, rel=1e-12, abs_=1e-12):
    return abs(a - b) <= abs_ + rel * abs(b)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
