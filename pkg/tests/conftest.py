from __future__ import annotations

import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def verdict():
    """Record one line per acceptance criterion and fail the test if it did not hold."""

    def record(criterion: str, ok: bool | None, detail: str) -> None:
        tag = "REPORT" if ok is None else ("PASS" if ok else "FAIL")
        line = f"[{tag}] criterion {criterion}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line, flush=True)
        if ok is False:
            pytest.fail(line, pytrace=False)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
