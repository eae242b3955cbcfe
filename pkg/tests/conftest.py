import json
import warnings
from pathlib import Path

import pytest

from zra import root_atlas as ra

ORACLES = Path(__file__).parent / "oracles"
FULL_HEIGHT = 6200.0


@pytest.fixture(scope="session")
def reference():
    return json.loads((ORACLES / "reference.json").read_text())


@pytest.fixture(scope="session")
def oracle_zeros():
    return [float(line) for line in (ORACLES / "zeros_649.txt").read_text().split()]


@pytest.fixture(scope="session")
def zeros_1000():
    return ra.find_zeros(10.0, 1000.0)


@pytest.fixture(scope="session")
def full_zeros():
    """All zeros up to height 6200, enough to cover t0 + T(t0) for t0 <= 500."""
    with warnings.catch_warnings():
        warnings.simplefilter("error", ra.DoubleZeroSuspected)
        return ra.find_zeros(10.0, FULL_HEIGHT)


@pytest.fixture(scope="session")
def critical_500(full_zeros):
    return ra.critical_points(full_zeros, 500.0)


ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        name, ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} [{n:2d}] {name}: {detail}")
