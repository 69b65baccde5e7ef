import pytest

ACCEPTANCE_RESULTS = []


@pytest.fixture
def record_criterion():
    """Record one acceptance criterion outcome for the terminal summary."""

    def record(number, title, passed, detail=""):
        line = f"criterion {number} [{'PASS' if passed else 'FAIL'}] {title}: {detail}"
        ACCEPTANCE_RESULTS.append((number, line))
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE_RESULTS, key=lambda t: t[0]):
        terminalreporter.write_line(line)
