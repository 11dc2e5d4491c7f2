import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from nief_spectra.model import COHERENCES, FieldSpec, RelaxationSpec

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

rates = st.floats(0.1, 10.0, allow_nan=False)
detunings = st.floats(-20.0, 20.0, allow_nan=False)
amplitudes = st.floats(0.0, 5.0, allow_nan=False)
phases = st.floats(0.0, 2 * np.pi, allow_nan=False)
fractions = st.floats(0.0, 1.0, allow_nan=False)


@st.composite
def relaxations(draw, natural=False):
    gt = {k: draw(rates) for k in "gnml"}
    branch = {}
    for up in "gm":
        total = draw(fractions) * gt[up]
        split = draw(fractions)
        branch[up + "l"], branch[up + "n"] = split * total, (1 - split) * total
    pump = {k: draw(fractions) * gt[k] for k in "gnml"}
    if natural:
        return RelaxationSpec.natural(gt, branch=branch, pump=pump)
    widths = {k: draw(rates) for k in COHERENCES}
    return RelaxationSpec(gt, widths, branch, pump)


@st.composite
def field_specs(draw, strong=True, probe=1e-3):
    det = tuple(draw(detunings) for _ in range(4))
    g1 = draw(amplitudes) * np.exp(1j * draw(phases)) if strong else 0.0
    g3 = draw(amplitudes) * np.exp(1j * draw(phases)) if strong else 0.0
    return FieldSpec(det, (g1, probe, g3, probe))


@pytest.fixture
def unit_relax():
    """Equal unit decay rates, natural widths, population pumped into n."""
    return RelaxationSpec.natural({"g": 1.0, "m": 1.0, "n": 1.0, "l": 1.0}, pump={"n": 1.0})


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
