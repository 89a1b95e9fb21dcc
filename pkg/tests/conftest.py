import os

import pytest

_CRITERIA = []


@pytest.fixture
def criterion():
    """Record and print one PASS/FAIL line per acceptance criterion, then assert."""

    def record(label: str, ok: bool, detail: str = ""):
        line = f"[{'PASS' if ok else 'FAIL'}] {label}" + (f" -- {detail}" if detail else "")
        _CRITERIA.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)


def flagship_enabled() -> bool:
    return os.environ.get("CYLDOM_FLAGSHIP", "") not in ("", "0")
