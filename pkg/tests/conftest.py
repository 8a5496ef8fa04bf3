import numpy as np
import pytest

from finentropy.indicators import Category, CompanyRecord, Direction, IndicatorRegistry, IndicatorSpec


def make_registry(directions):
    """Registry with ids c0..c{k-1}; ``directions`` is a string like "PPI"."""
    lookup = {"P": Direction.POSITIVE, "I": Direction.INVERSE}
    return IndicatorRegistry(tuple(
        IndicatorSpec(f"c{j}", f"col {j}", Category.PROFITABILITY, lookup[d], "ratio")
        for j, d in enumerate(directions)
    ))


def make_companies(n):
    return tuple(CompanyRecord(f"T{i:03d}") for i in range(n))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
