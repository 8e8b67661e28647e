"""Shared fixtures and the acceptance summary printed at the end of a run."""

import numpy as np
import pytest

ACCEPTANCE_LINES: list = []


def report(criterion: int, ok: bool, detail: str) -> str:
    line = f"{'PASS' if ok else 'FAIL'} criterion {criterion:2d}: {detail}"
    ACCEPTANCE_LINES.append((criterion, line))
    print(line)
    return line


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance")
    for _, line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
