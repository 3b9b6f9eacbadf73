import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report(capsys):
    """Print one result line immediately and keep it for the session summary."""

    def _report(line: str) -> None:
        ACCEPTANCE_LINES.append(line)
        with capsys.disabled():
            print("\n" + line, flush=True)

    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
