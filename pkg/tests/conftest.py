import math

import numpy as np
import pytest
from hypothesis import strategies as st

from es_qfi.resonator import SystemParams

ACCEPTANCE_LINES: list[str] = []

rhos = st.floats(0.0, 1.0)
phis = st.floats(0.0, 2 * math.pi)
epsilons = st.floats(-1.0, 1.0)
gammas = st.floats(0.2, 5.0)
omegas = st.floats(-5.0, 5.0)


@st.composite
def params(draw, gamma=None):
    g = draw(gammas) if gamma is None else gamma
    return SystemParams(rho=draw(rhos), phi=draw(phis), epsilon=draw(epsilons) * g, gamma=g)


def random_params(rng, n, gamma=1.0):
    for _ in range(n):
        yield SystemParams(
            rho=rng.uniform(0, 1), phi=rng.uniform(0, 2 * math.pi),
            epsilon=rng.uniform(-1, 1) * gamma, gamma=gamma,
        )


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
