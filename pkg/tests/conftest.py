"""Collects per-criterion outcomes from tests marked ``criterion`` and prints
one PASS/FAIL line per criterion at the end of the run."""

import pytest

_results: dict[str, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(cid, title): acceptance criterion this test checks")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    cid, title = mark.args
    entry = _results.setdefault(cid, {"title": title, "failed": [], "ran": 0})
    if rep.when == "call":
        entry["ran"] += 1
    if rep.failed:
        entry["failed"].append(item.name)


def _order(cid: str):
    return int(cid.lstrip("C")) if cid.lstrip("C").isdigit() else 10**6


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_results, key=_order):
        e = _results[cid]
        status = "FAIL" if e["failed"] or not e["ran"] else "PASS"
        line = f"{cid:>4} {status}  {e['title']}"
        if e["failed"]:
            line += f"  (failed: {', '.join(e['failed'])})"
        terminalreporter.write_line(line)
