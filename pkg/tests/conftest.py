from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import strategies as st

from tropibary.measure import GroundSpace
from tropibary.sampling import interval_space

NEG_INF = -math.inf

# Multiples of 1/8 keep max-plus sums exact, so laws can be checked with ==.
dyadic = st.integers(-64, 64).map(lambda k: k / 8)
scalar = st.one_of(dyadic, st.just(NEG_INF))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def two_points() -> GroundSpace:
    """Two points at distance 1."""
    return GroundSpace.from_matrix([[0.0, 1.0], [1.0, 0.0]], labels=["a", "b"])


@pytest.fixture
def segment() -> GroundSpace:
    return GroundSpace.from_points([[0.0, 1.0], [3.0, 0.0]])


@pytest.fixture(scope="session")
def unit_grid() -> GroundSpace:
    return interval_space(101)


def pytest_terminal_summary(terminalreporter) -> None:
    from .test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
