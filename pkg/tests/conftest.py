import pytest

_VERDICTS: list[tuple[str, bool, str]] = []


@pytest.fixture
def verdict():
    """Record one acceptance line; the test still asserts on its own."""

    def record(name: str, passed: bool, detail: str = "") -> bool:
        _VERDICTS.append((name, passed, detail))
        print(f"ACCEPTANCE {'PASS' if passed else 'FAIL'} {name}: {detail}")
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _VERDICTS:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
