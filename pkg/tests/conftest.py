"""Shared pytest wiring.

Collects the outcome of every acceptance test and prints one PASS or FAIL
line per criterion at the end of the run, so the verdicts survive even when
the full -v listing scrolls away.
"""

from __future__ import annotations

import re

_CRITERION_PATTERN = re.compile(r"test_acceptance\.py::test_criterion_(\d+)")

_criterion_status: dict[int, str] = {}


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    match = _CRITERION_PATTERN.search(report.nodeid)
    if match is None:
        return
    idx = int(match.group(1))
    outcome = "PASS" if report.passed else "FAIL"
    if _criterion_status.get(idx) == "FAIL":
        return
    _criterion_status[idx] = outcome


def pytest_terminal_summary(terminalreporter):
    if not _criterion_status:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for idx in sorted(_criterion_status):
        terminalreporter.write_line(
            f"ACCEPTANCE CRITERION {idx}: {_criterion_status[idx]}"
        )
