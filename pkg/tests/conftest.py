import sys

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from pforms.field import Field
from pforms.sampling import random_element

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow, HealthCheck.large_base_example,
                                                 HealthCheck.data_too_large])
settings.load_profile("default")

FIELDS = [Field(2, ("x", "y", "z")), Field(3, ("x", "y")), Field(5, ("x", "y")), Field(3, ("x", "y", "z"))]


def elements(F, **kw):
    return st.randoms(use_true_random=False).map(lambda r: random_element(F, r, **kw))


def nonzero_pairs(F, **kw):
    return st.tuples(elements(F, **kw), elements(F, **kw))


fields = st.sampled_from(FIELDS)


@pytest.fixture
def F2():
    return Field(2, ("x", "y"))


@pytest.fixture
def F2xyz():
    return Field(2, ("x", "y", "z"))


@pytest.fixture
def F3():
    return Field(3, ("x", "y"))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.LINES, key=lambda l: int(l.split()[1])):
            terminalreporter.write_line(line)
