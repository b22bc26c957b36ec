"""Shared pytest wiring for the suite.

The only global piece is a terminal-summary hook: every test collected
from test_acceptance.py is echoed after the run as a single PASS / FAIL
line, so the release gate reads as one line per criterion regardless of
verbosity settings.
"""

_acceptance_outcomes = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    # keep the worst outcome across setup/call/teardown phases
    if report.failed:
        _acceptance_outcomes[report.nodeid] = "FAIL"
    elif report.skipped:
        _acceptance_outcomes.setdefault(report.nodeid, "SKIP")
    elif report.when == "call":
        _acceptance_outcomes.setdefault(report.nodeid, "PASS")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid in sorted(_acceptance_outcomes):
        name = nodeid.split("::")[-1]
        terminalreporter.write_line(
            f"{_acceptance_outcomes[nodeid]}  {name}")
