import numpy as np
import pytest

from ferrimagnon import SystemParams

FIG2 = dict(anis_a=0.0163, kappa_a=0.001, kappa_b=0.001, kappa_c=0.003,
            g_ac=0.01, omega_c_over_hsp=0.85)


@pytest.fixture
def fig2():
    """Parameter factory for the field-sweep figures."""
    def make(**kw):
        return SystemParams(**{**FIG2, **kw})
    return make


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_stable_drift(rng, n=6):
    """Random real matrix shifted so that its spectrum sits strictly left of the axis."""
    a = rng.normal(size=(n, n))
    shift = np.max(np.linalg.eigvals(a).real) + rng.uniform(0.1, 1.0)
    return a - shift * np.eye(n)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
