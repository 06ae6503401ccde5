import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from relbell import ChshSettings  # noqa: E402


@pytest.fixture
def standard():
    return ChshSettings.standard()


@pytest.fixture
def rng():
    return np.random.default_rng(20121010)


def random_unit(rng, n=None):
    v = rng.normal(size=(3,) if n is None else (n, 3))
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def random_velocity(rng, n=None, vmax=0.999):
    d = random_unit(rng, n)
    speed = rng.uniform(0.0, vmax, size=() if n is None else (n, 1))
    return speed * d


_acceptance = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
