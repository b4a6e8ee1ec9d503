from pathlib import Path

import pytest

from pnverify.dsl import parse_net

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
FIXTURE_NETS = ("fig1", "fig2", "fig3a", "fig3b", "scenario")


def load(name):
    return parse_net((FIXTURES / f"{name}.pn").read_text())


@pytest.fixture
def fig1():
    return load("fig1")


@pytest.fixture
def fig2():
    return load("fig2")


@pytest.fixture
def fig3a():
    return load("fig3a")


@pytest.fixture
def fig3b():
    return load("fig3b")


@pytest.fixture
def scenario_net():
    return load("scenario")


@pytest.fixture(params=FIXTURE_NETS)
def fixture_net(request):
    return load(request.param)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
