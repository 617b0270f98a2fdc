import os

import pytest
from hypothesis import HealthCheck, settings

from covfail.complex import build_rips_2skeleton
from covfail.fixtures import fence_graph, pair_graph, twin_graph, wheel_graph

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], max_examples=60
)
settings.register_profile("thorough", deadline=None, max_examples=500)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# filled by test_acceptance.py, echoed once at the end of the run
_ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)


@pytest.fixture
def wheel():
    return build_rips_2skeleton(wheel_graph(6))


@pytest.fixture
def fence5():
    return build_rips_2skeleton(fence_graph(5))


@pytest.fixture
def twin():
    return build_rips_2skeleton(twin_graph())


@pytest.fixture
def pair():
    return build_rips_2skeleton(pair_graph())
