from __future__ import annotations

import pytest

from riemann_lab.zeros import BUNDLED_ZEROS, load_zeros


@pytest.fixture(scope="session")
def zeros():
    return load_zeros(BUNDLED_ZEROS)


@pytest.fixture(scope="session")
def zeros1000(zeros):
    return zeros.head(1000)


_VERDICTS = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_VERDICTS] = []


@pytest.fixture
def verdict(request):
    """Record one acceptance line; the test then asserts on ``ok``."""
    lines = request.config.stash[_VERDICTS]

    def record(number: int, title: str, ok: bool, detail: str) -> bool:
        line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
        lines.append((number, line))
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_VERDICTS, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(lines):
        terminalreporter.write_line(line)
