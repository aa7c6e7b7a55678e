import pytest

from config.fixtures import get_fixture, get_snapshot
from engines.fairness import FairnessChecker
from engines.matching_engine import MatchingEngine
from engines.oracle import Oracle
from engines.solver import Solver
from utils.io_helpers import parse_allocation, parse_instance


@pytest.fixture
def fixture_instance():
    """예제 이름 -> Instance"""

    def load(name):
        return parse_instance(get_fixture(name)["instance"])

    return load


@pytest.fixture
def snapshot():
    """(예제, 스냅샷) -> Allocation"""

    def load(name, snap):
        return parse_allocation(get_snapshot(name, snap))

    return load


@pytest.fixture
def good_and_chore(fixture_instance):
    return fixture_instance("intro")


@pytest.fixture
def two_categories(fixture_instance):
    return fixture_instance("table2")


@pytest.fixture
def repeated_matching(fixture_instance):
    return fixture_instance("table3")


@pytest.fixture
def top_trading_overflow(fixture_instance):
    return fixture_instance("table4")


@pytest.fixture
def envy_cycle(fixture_instance):
    return fixture_instance("table5")


@pytest.fixture
def ef1_improvement(fixture_instance):
    return fixture_instance("table6")


@pytest.fixture
def checker():
    return FairnessChecker()


@pytest.fixture
def engine():
    return MatchingEngine()


@pytest.fixture
def oracle():
    return Oracle(budget=1_000_000)


@pytest.fixture
def solver():
    return Solver(certify_steps=True)
