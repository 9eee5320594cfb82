from fractions import Fraction
from pathlib import Path

import pytest

from hypchain.group import free_group, surface_group

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def f2():
    return free_group(2, 14)


@pytest.fixture(scope="session")
def f2_small():
    return free_group(2, 6)


@pytest.fixture(scope="session")
def genus2_small():
    return surface_group(2, 4, delta=Fraction(2))


@pytest.fixture(scope="session")
def genus2():
    return surface_group(2, 6, delta=Fraction(2))


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
