import numpy as np
import pytest
from skimage import data


@pytest.fixture(scope="session")
def camera():
    return data.camera()


@pytest.fixture(scope="session")
def moon():
    return data.moon()


@pytest.fixture(scope="session", params=["camera", "moon"])
def standard_image(request):
    return getattr(data, request.param)()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE_RESULTS = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py::" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        ACCEPTANCE_RESULTS.append((name, report.outcome, report.duration))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome, duration in ACCEPTANCE_RESULTS:
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{mark}] {name} ({duration:.1f}s)")
