"""Shared hooks: acceptance criteria report one PASS/FAIL line each."""
import pytest

_RESULTS = {}


@pytest.fixture
def criterion(request):
    """Record the outcome of one acceptance criterion.

    Call ``criterion(number, ok, detail)``; the line is printed at once and
    repeated in the terminal summary.
    """
    def record(number, ok, detail):
        line = f"AC{number:<2} {'PASS' if ok else 'FAIL'}  {detail}"
        _RESULTS[number] = line
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        terminalreporter.write_line(_RESULTS[number])
