import numpy as np
import pytest
from hypothesis import settings

from npcfactors import dgp

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def canonical():
    return dgp.ModelConfig.canonical()


@pytest.fixture
def rand():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def record_criterion(number, passed, detail):
    line = f"{'PASS' if passed else 'FAIL'} criterion {number}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
