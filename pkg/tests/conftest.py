import pytest

_criteria: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    """Record one acceptance line: ``criterion(key, passed, detail)``."""
    def record(key, passed, detail=""):
        _criteria[key] = (passed, detail)
        print(f"[{'PASS' if passed else 'FAIL'}] {key} {detail}")
    return record


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_criteria):
        passed, detail = _criteria[key]
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {key} {detail}")
