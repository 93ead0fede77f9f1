import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

_criteria: list[tuple[int, str, str]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, text): acceptance criterion number and summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.skipped):
        status = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")
        _criteria.append((marker.args[0], marker.args[1], status))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n, text, status in sorted(_criteria):
        terminalreporter.write_line(f"[{status}] criterion {n}: {text}")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
