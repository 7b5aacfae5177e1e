from pathlib import Path

import numpy as np
import pytest

from nurse_ga.dataio import instance_from_parts, load_instance
from nurse_ga.model import DemandTable, default_library, enumerate_pattern_library

FIXTURES = Path(__file__).parent / "fixtures"
ZERO_WISHES = (0,) * 14


def make_instance(nurses, demand_rows=None, penalties=None, ranges=None, senior_flags=None, library=None):
    """Instance from (grade, level, preference) triples with zero wishes and synthesized penalties."""
    library = library or enumerate_pattern_library()
    demand = DemandTable.from_grade_rows(demand_rows or [[0] * 14] * 3)
    wishes = [ZERO_WISHES] * len(nurses)
    return instance_from_parts(list(nurses), wishes, demand, library, None, penalties, ranges, senior_flags)


@pytest.fixture(scope="session")
def library():
    return default_library()


@pytest.fixture(scope="session")
def ward():
    """The 21-nurse reference week with its pattern table and synthesized penalties."""
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return load_instance(
            FIXTURES / "a1_demand.txt",
            FIXTURES / "a2_qualifications.txt",
            FIXTURES / "a3_wishes.txt",
            FIXTURES / "a4_patterns.txt",
        )


@pytest.fixture(scope="session")
def lp_toy():
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from nurse_ga.dataio import load_instance_dir

        return load_instance_dir(FIXTURES / "lp_toy")


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
