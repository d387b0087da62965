"""Shared pytest wiring: a per-criterion summary for the acceptance suite.

Every acceptance test is named ``test_criterion_<k>_...``; the hooks below
collect their outcomes and print one ``criterion k: PASS/FAIL`` line per
criterion at the end of the run, with whatever detail the test recorded.
"""

import re

_results: dict[int, str] = {}
_details: dict[int, str] = {}


def note(criterion: int, detail: str) -> None:
    """Attach a human-readable result line to a criterion."""
    _details[criterion] = detail


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    match = re.search(r"test_criterion_(\d+)", report.nodeid)
    if match:
        _results[int(match.group(1))] = report.outcome


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_results):
        verdict = _results[num].upper()
        detail = _details.get(num)
        line = f"criterion {num}: {verdict}"
        if detail:
            line += f" ({detail})"
        terminalreporter.write_line(line)
