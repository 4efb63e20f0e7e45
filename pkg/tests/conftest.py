import random
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from matwaring.arithmetic import GaussianRational

settings.register_profile(
    "default",
    deadline=None,
    max_examples=30,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

G = GaussianRational


def mat(rows):
    """Exact matrix from nested ints or strings."""
    return np.array([[G.parse(str(x)) for x in row] for row in rows], dtype=object)


@st.composite
def gaussian_rationals(draw, bound=10):
    re_num = draw(st.integers(-bound, bound))
    re_den = draw(st.integers(1, bound))
    im_num = draw(st.integers(-bound, bound))
    im_den = draw(st.integers(1, bound))
    return G(re_num) / re_den + G(0, im_num) / im_den


@st.composite
def exact_matrices(draw, min_n=1, max_n=4, bound=5):
    n = draw(st.integers(min_n, max_n))
    return np.array(
        [[draw(gaussian_rationals(bound)) for _ in range(n)] for _ in range(n)],
        dtype=object,
    )


@pytest.fixture
def rng():
    return random.Random(1234)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is not None and module.LINES:
        terminalreporter.section("acceptance criteria")
        for line in module.LINES:
            terminalreporter.write_line(line)
