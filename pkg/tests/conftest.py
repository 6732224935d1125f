import pytest
from hypothesis import settings

from wittclass.fields import QQ, parse_field

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def Qi():
    return parse_field("Q(i)")


@pytest.fixture
def Q3():
    return parse_field("Q(sqrt,-3)")


@pytest.fixture
def eps(Q3):
    """Primitive cube root of unity in Q(sqrt -3)."""
    return Q3.parse("-1/2+1/2*r")


@pytest.fixture
def Q():
    return QQ


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
