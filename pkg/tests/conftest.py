from __future__ import annotations

import pytest

_LINES = pytest.StashKey[list]()


@pytest.fixture
def acceptance(request):
    """``acceptance(tag, ok, detail)`` records one criterion line for the summary."""
    lines = request.config.stash.setdefault(_LINES, [])

    def record(tag: str, ok: bool, detail: str) -> bool:
        line = f"{tag:<5} {'PASS' if ok else 'FAIL'}  {detail}"
        lines.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
