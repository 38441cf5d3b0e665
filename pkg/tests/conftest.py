import numpy as np
import pytest
from hypothesis import settings, strategies as st

from qpp import battery

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(1, 10)
sources = st.sampled_from(battery.SOURCES)


@st.composite
def quasi_pairs(draw, max_dim=10):
    kind = draw(sources)
    n = draw(st.integers(1 if kind != "A_family" else 2, max_dim))
    rng = np.random.default_rng(draw(seeds))
    return battery.random_pair(kind, n, rng)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
