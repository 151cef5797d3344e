from __future__ import annotations

import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from mutheta.datum import load_fixture
from mutheta.random_data import random_datum, random_inert_pair_datum

settings.register_profile(
    "repo",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


@pytest.fixture(scope="session")
def split():
    return load_fixture("split")


@pytest.fixture(scope="session")
def inert21():
    return load_fixture("inert21")


@pytest.fixture(scope="session")
def inert11():
    return load_fixture("inert11")


@pytest.fixture(scope="session")
def deformed():
    return load_fixture("def")


@pytest.fixture(scope="session")
def symplectic():
    return load_fixture("c")


seeds = st.integers(min_value=0, max_value=2**32 - 1)


def datum_from_seed(seed: int):
    return random_datum(random.Random(seed))


def inert_pair_from_seed(seed: int):
    return random_inert_pair_datum(random.Random(seed))


ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, title: str, passed: bool, detail: str = "") -> None:
    """Print one PASS/FAIL line and keep it for the end-of-run summary."""
    line = f"{'PASS' if passed else 'FAIL'} criterion {number}: {title}"
    if detail:
        line += f" ({detail})"
    print(line)
    ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
