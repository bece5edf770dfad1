from __future__ import annotations

ACCEPTANCE_LINES: list[str] = []


def record(line: str) -> None:
    """Remember one acceptance verdict line for the terminal summary."""
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
