import sys


def pytest_terminal_summary(terminalreporter):
    """Print the acceptance verdicts, one line per criterion, after the run."""
    module = next(
        (m for name, m in list(sys.modules.items()) if name.rsplit(".", 1)[-1] == "test_acceptance"),
        None,
    )
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
