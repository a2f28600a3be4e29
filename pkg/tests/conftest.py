"""Print one PASS/FAIL line per acceptance criterion at the end of the run."""

from __future__ import annotations

import re

_CRITERIA: dict[int, tuple[str, bool]] = {}
_NAME = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")


def pytest_runtest_logreport(report):
    m = _NAME.search(report.nodeid)
    if not m:
        return
    num, title = int(m.group(1)), m.group(2).replace("_", " ")
    failed = report.failed
    prev = _CRITERIA.get(num, (title, True))[1]
    if report.when == "call" or failed:
        _CRITERIA[num] = (title, prev and not failed)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        title, ok = _CRITERIA[num]
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {title}")
