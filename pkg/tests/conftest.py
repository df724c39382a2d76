import helpers


def pytest_terminal_summary(terminalreporter):
    if helpers.REPORT:
        terminalreporter.section("acceptance criteria")
        for line in helpers.REPORT:
            terminalreporter.write_line(line)
