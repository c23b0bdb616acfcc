from __future__ import annotations

from fractions import Fraction

import pytest

from minkowski.core import Event


def E(*coords) -> Event:
    """Event from ints, Fractions or "p/q" strings."""
    return Event(*(Fraction(c) if isinstance(c, str) else c for c in coords))


@pytest.fixture
def ev():
    return E


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
