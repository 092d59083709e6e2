import math

import numpy as np
import pytest
from hypothesis import strategies as st

from gaussfid import state_model as sm

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240515)


@st.composite
def canonical_forms(draw, gamma_max=5.0, m_max=3.0):
    gamma = draw(st.floats(1.0, gamma_max))
    m = draw(st.floats(1.0, m_max))
    theta = draw(st.floats(0.0, math.pi, exclude_max=True))
    return sm.CanonicalForm(gamma, m, theta)


@st.composite
def displacements(draw, radius=5.0):
    r = draw(st.floats(0.0, radius))
    phi = draw(st.floats(0.0, 2 * math.pi))
    return sm.Displacement(r * math.cos(phi), r * math.sin(phi))


@st.composite
def gaussian_states(draw, gamma_max=5.0, m_max=3.0, radius=5.0):
    return sm.from_canonical(draw(canonical_forms(gamma_max, m_max)), draw(displacements(radius)))


@st.composite
def density_kernels(draw, gamma_max=5.0, m_max=3.0, radius=5.0):
    return sm.kernel_from_state(draw(gaussian_states(gamma_max, m_max, radius)))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
