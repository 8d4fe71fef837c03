import pytest

from cyclelab import get_scenario


@pytest.fixture(scope="session")
def su11():
    return get_scenario("su11")


@pytest.fixture(scope="session")
def su21():
    return get_scenario("su21")
