import pytest

CRITERIA: dict[int, str] = {}


@pytest.fixture
def criterion():
    """Record one acceptance line; it is echoed now and again in the terminal summary."""
    def record(n: int, passed: bool, detail: str) -> None:
        line = f"CRITERION {n}: {'PASS' if passed else 'FAIL'} {detail}"
        CRITERIA[n] = line
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for n in sorted(CRITERIA):
            terminalreporter.write_line(CRITERIA[n])
