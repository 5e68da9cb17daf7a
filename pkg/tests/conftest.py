"""Per-criterion PASS/FAIL summary for the acceptance suite."""

from __future__ import annotations

import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

_criteria: dict[int, str] = {}
_owner: dict[str, int] = {}
_outcome: dict[int, list[str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion this test belongs to")


def pytest_collection_modifyitems(config, items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is None:
            continue
        number, title = mark.args
        _criteria[number] = title
        _owner[item.nodeid] = number


def pytest_runtest_logreport(report):
    number = _owner.get(report.nodeid)
    if number is None:
        return
    if report.when == "call" or report.outcome != "passed":
        _outcome.setdefault(number, []).append("skipped" if report.skipped else report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        results = _outcome.get(number, [])
        if not results:
            state = "NOT RUN (deselected)"
        elif "failed" in results:
            state = "FAIL"
        elif all(r == "skipped" for r in results):
            state = "SKIPPED"
        else:
            state = "PASS"
        terminalreporter.write_line(f"criterion {number} ({_criteria[number]}): {state}")
