import random

import pytest

from criticalideals.digraph import enumerate_connected


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run exhaustive n = 5 suites")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope="session")
def classes_up_to_4():
    return [d for n in range(1, 5) for d in enumerate_connected(n)]


@pytest.fixture
def rng():
    return random.Random(20240611)
