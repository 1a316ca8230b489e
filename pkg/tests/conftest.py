import numpy as np
import pytest

from tatekit.catalog import catalog_group
from tatekit.modrep import trivial_module

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def k_of():
    def make(name, p):
        return trivial_module(catalog_group(name), p)

    return make
