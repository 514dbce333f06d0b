import helpers


def pytest_terminal_summary(terminalreporter):
    """Echo the one-line verdicts from the release-gate tests."""
    if helpers.acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in helpers.acceptance_lines:
            terminalreporter.write_line(line)
