import numpy as np
import pytest

from hypertoric import build

# m=2, d=3: subtorus generated by e1+e2 and e1+e3, alpha = theta1*/2 + theta2*
EXAMPLE_A = [[1, 1, 0], [1, 0, 1]]
EXAMPLE_ALPHA = ["1/2", "1"]


@pytest.fixture
def example():
    return build(EXAMPLE_A, EXAMPLE_ALPHA, [0, 0])


@pytest.fixture
def eguchi_hanson():
    return build([[1, 1]], [1], [0])


@pytest.fixture
def flat_line():
    """m = 0, d = 1: the quotient is H itself."""
    return build([], [], [], d=1)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_acceptance: dict[str, str] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    label = marker.args[0] if marker.args else item.name
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _acceptance[label] = "PASS" if rep.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_acceptance, key=lambda s: int(s.split()[0])):
        terminalreporter.write_line(f"{_acceptance[label]}  criterion {label}")
