import numpy as np
import pytest

from bandit_net.env import Environment
from bandit_net.graph import star

STAR_MEANS = (40, 50, 50, 60, 70, 70, 80, 90, 92, 95)


@pytest.fixture
def star_env():
    return Environment.gaussian(STAR_MEANS, 5.0)


@pytest.fixture
def star6():
    return star(6)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
