"""Shared pytest plumbing: surfaces the acceptance criterion verdicts.

The acceptance tests register one line per criterion; printing from
inside a test would be swallowed by capture, so the lines are replayed
in the terminal summary instead.
"""

CRITERION_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERION_LINES:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for num in sorted(CRITERION_LINES):
        terminalreporter.write_line(CRITERION_LINES[num])
