from __future__ import annotations

import pytest

# test_acceptance records one line per criterion here
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])


@pytest.fixture
def acceptance_line():
    def record(n: int, ok: bool, detail: str) -> None:
        ACCEPTANCE_LINES[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}"

    return record
