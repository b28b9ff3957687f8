import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))


def pytest_terminal_summary(terminalreporter):
    import suites

    if not suites.ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(suites.ACCEPTANCE_LINES):
        terminalreporter.write_line(suites.ACCEPTANCE_LINES[n])
