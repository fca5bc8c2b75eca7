import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from catlyap import potential as pot
from catlyap.torus import cat_map, make_map

settings.register_profile("catlyap", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("catlyap")

ALPHA = (3.0 + 5.0 ** 0.5) / 2.0
GOLDEN = (1.0 + 5.0 ** 0.5) / 2.0


@pytest.fixture(scope="session")
def tmap():
    return cat_map()


@pytest.fixture(scope="session")
def tmap31():
    return make_map(3, 1, 2, 1)


@pytest.fixture(scope="session")
def vexp():
    return pot.exponential(normalized=True)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
