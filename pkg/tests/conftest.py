import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from agd.adjustment import classify  # noqa: E402
from agd.fixtures import mackenzie, so3_action  # noqa: E402

settings.register_profile("agd", max_examples=100, deadline=None, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("agd")


@pytest.fixture(scope="session")
def so3():
    d, rep = classify(so3_action())
    assert rep.passed
    return d


@pytest.fixture(scope="session")
def mack():
    d, rep = classify(mackenzie())
    assert rep.passed
    return d


# -- one summary line per acceptance criterion -------------------------------

_criterion_of: dict[str, int] = {}
_criterion_ok: dict[int, bool] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion the test belongs to")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _criterion_of[item.nodeid] = m.args[0]
            _criterion_ok.setdefault(m.args[0], True)


def pytest_runtest_logreport(report):
    n = _criterion_of.get(report.nodeid)
    if n is None:
        return
    if report.failed or (report.when == "call" and not report.passed):
        _criterion_ok[n] = False


def pytest_terminal_summary(terminalreporter):
    if not _criterion_ok:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criterion_ok):
        terminalreporter.write_line(f"criterion {n}: {'PASS' if _criterion_ok[n] else 'FAIL'}")
