import sys

import pytest

from lambdacube import ALL_SYSTEMS, parse_context
from lambdacube.generate import mixed_cases, normal_corpus, redex_corpus

G0_SRC = "P : Prop; f : P -> P; a : P"


@pytest.fixture(scope="session")
def g0():
    return parse_context(G0_SRC)


@pytest.fixture(scope="session")
def corpus():
    """Beta-eta normal well-typed terms, 70 per system."""
    return normal_corpus(seed=0, per_system=70)


@pytest.fixture(scope="session")
def small_corpus():
    return normal_corpus(seed=1, per_system=12)


@pytest.fixture(scope="session")
def redex_cases():
    return redex_corpus(seed=0, per_system=13)[:100]


@pytest.fixture(scope="session")
def mixed_small():
    return [c for system in ALL_SYSTEMS for c in mixed_cases(system, 11, 12)]


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
