from __future__ import annotations

import pytest

# criterion id -> list of (subtest label, passed)
_CRITERIA: dict[str, list[tuple[str, bool]]] = {}
_TITLES: dict[str, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(cid, title): acceptance criterion this test belongs to")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        cid, title = marker.args
        _TITLES[cid] = title
        _CRITERIA.setdefault(cid, []).append((item.name, report.passed))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for cid in sorted(_CRITERIA, key=int):
        results = _CRITERIA[cid]
        ok = all(passed for _, passed in results)
        tr.write_line(f"criterion {cid:>2}: {'PASS' if ok else 'FAIL'}  {_TITLES[cid]}")
        if len(results) > 1:
            for name, passed in results:
                tr.write_line(f"    {'PASS' if passed else 'FAIL'}  {name}")
