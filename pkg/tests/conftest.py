"""Shared pytest wiring: the acceptance-criteria report.

test_acceptance records one (name, ok, detail) entry per criterion in
_verdicts; the terminal-summary hook replays them as uncaptured
pass/fail lines at the end of the run so the verdicts survive output
capturing.
"""

import _verdicts


def pytest_terminal_summary(terminalreporter):
    if not _verdicts.ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in _verdicts.ACCEPTANCE_RESULTS:
        line = f"[ACCEPTANCE] {name}: {'PASS' if ok else 'FAIL'}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)
