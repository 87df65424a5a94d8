import sys
from pathlib import Path

import pytest

from profinite_lab.cli import fixture_path
from profinite_lab.halting_set import HaltingSet
from profinite_lab.machines import Registry

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = ("loop", "loop_declared", "halt1", "halt14")

ACCEPTANCE_RESULTS = []


def make_set(*names):
    return HaltingSet(Registry.from_files([fixture_path(n) for n in names]))


@pytest.fixture
def loop_set():
    return make_set("loop")


@pytest.fixture
def loop_declared_set():
    return make_set("loop_declared")


@pytest.fixture
def halt1_set():
    return make_set("halt1")


@pytest.fixture
def halt14_set():
    return make_set("halt14")


@pytest.fixture(params=FIXTURES)
def any_set(request):
    return make_set(request.param)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}")
