"""Shared pytest wiring.

The acceptance tests record a verdict line apiece; printing them in the
terminal summary keeps them visible whether or not output capture is on.
"""

_criterion_lines: list[str] = []


def record_criterion(line: str) -> None:
    _criterion_lines.append(line)


def pytest_terminal_summary(terminalreporter):
    if not _criterion_lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in _criterion_lines:
        terminalreporter.write_line(line)
