import re

import pytest

_LINES = []


@pytest.fixture
def verdict():
    """Record a one-line pass/fail verdict for the terminal summary."""

    def record(label, ok, detail=""):
        line = f"criterion {label}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
        _LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES, key=_order):
            terminalreporter.write_line(line)


def _order(line):
    m = re.match(r"criterion (\d+)(\w*)", line)
    return int(m.group(1)), m.group(2)
