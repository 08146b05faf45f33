import re

import numpy as np
import pytest

from srediag import gallery as G

_AC_RESULTS = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_ac(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    num = int(m.group(1))
    if report.when == "call" or report.outcome != "passed":
        name, prev = _AC_RESULTS.get(num, (m.group(2), "PASS"))
        _AC_RESULTS[num] = (name, "FAIL" if (report.failed or prev == "FAIL") else "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _AC_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num, (name, outcome) in sorted(_AC_RESULTS.items()):
        terminalreporter.write_line(f"AC{num:02d} {name:<40} {outcome}")


@pytest.fixture
def hd():
    return G.hawk_dove(2, 4)


@pytest.fixture
def rps():
    return G.rps()


@pytest.fixture
def boundary():
    return G.boundary_example()


@pytest.fixture
def identity():
    return G.identity_example()


@pytest.fixture
def platform():
    return G.platform()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
