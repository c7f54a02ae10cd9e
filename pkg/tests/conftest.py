import numpy as np
import pytest

from qcomm import kernels

ACCEPTANCE_LINES = []


@pytest.fixture
def rng(request):
    # one reproducible stream per test, keyed on the test name
    key = [ord(ch) for ch in request.node.nodeid]
    return np.random.default_rng(np.random.SeedSequence(12345, spawn_key=tuple(key[-16:])))


@pytest.fixture(params=sorted(kernels.backends()))
def backend(request):
    return kernels.backends()[request.param]


def rel(x, y, scale):
    return abs(complex(x) - complex(y)) / scale


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    # keep the call-phase report on the item so fixtures can see the outcome at teardown
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep
