import pytest

# PASS/FAIL lines of the acceptance suite, printed again in the terminal summary
ACCEPTANCE_LINES = []


@pytest.fixture
def record():
    """Record one acceptance criterion outcome and print its PASS/FAIL line."""

    def _record(number, passed, detail):
        line = f"{'PASS' if passed else 'FAIL'} criterion {number}: {detail}"
        ACCEPTANCE_LINES.append((number, line))
        print(line)
        return passed

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
