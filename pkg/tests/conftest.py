import pytest

CRITERIA: list[str] = []


@pytest.fixture
def report(capsys):
    """Print one pass/fail line for an acceptance criterion, even under capture."""

    def _report(number, ok: bool, detail: str) -> None:
        line = f"CRITERION {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        CRITERIA.append(line)
        with capsys.disabled():
            print("\n" + line)

    return _report


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in CRITERIA:
            terminalreporter.write_line(line)
