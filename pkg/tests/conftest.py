import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from phasetwist.grid import gaussian, make_grid, phase_grid_for, sample

settings.register_profile(
    "default", deadline=None, max_examples=30, suppress_health_check=[HealthCheck.function_scoped_fixture]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def base():
    return make_grid(1, 256, "euclidean")


@pytest.fixture(scope="session")
def phase(base):
    return phase_grid_for(base)


@pytest.fixture(scope="session")
def g(base):
    return sample(gaussian((0.0,)), base)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def rel(a, b):
    a = np.asarray(getattr(a, "values", a))
    b = np.asarray(getattr(b, "values", b))
    den = np.max(np.abs(b))
    return float(np.max(np.abs(a - b)) / (den if den > 0 else 1.0))


# one line per acceptance criterion, printed after the run
ACCEPTANCE: dict[str, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE, key=lambda k: int(k.split()[0])):
            terminalreporter.write_line(ACCEPTANCE[key])
