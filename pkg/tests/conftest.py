import pathlib
import sys

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).parent))

_CRITERIA: dict[int, tuple[bool, str, str]] = {}


@pytest.fixture
def record_criterion():
    """Store one pass/fail line per acceptance criterion."""

    def record(number: int, title: str, ok: bool, detail: str) -> None:
        _CRITERIA[number] = (ok, title, detail)
        print(f"criterion {number} {'PASS' if ok else 'FAIL'}: {title}: {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        ok, title, detail = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number} {'PASS' if ok else 'FAIL'}: {title}: {detail}")
