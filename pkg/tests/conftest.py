import numpy as np
import pytest

from wignerkit.linalg import make_rng


@pytest.fixture
def rng():
    return make_rng(1234)


def pytest_configure(config):
    config._acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


def frob(A) -> float:
    return float(np.linalg.norm(A))
