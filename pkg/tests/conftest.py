from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from opcalc.suites import expmono_family, grid_family

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def rationals(max_num: int = 9, max_den: int = 3):
    return st.builds(Fraction, st.integers(-max_num, max_num), st.integers(1, max_den))


def matrices(max_rows: int = 5, max_cols: int = 5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(rationals(), min_size=c, max_size=c), min_size=r, max_size=r)))


@pytest.fixture(scope="session")
def grid66():
    return grid_family((6, 6))


@pytest.fixture(scope="session")
def expmono8():
    return expmono_family(8)


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
