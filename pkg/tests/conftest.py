"""Collects outcomes of tests marked ``criterion(n, title)`` and prints one
line per acceptance criterion at the end of the run."""
from collections import OrderedDict

import pytest

_RESULTS = OrderedDict()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.when != "call" and not report.failed:
        return
    number, title = mark.args
    entry = _RESULTS.setdefault(number, {"title": title, "tests": {}, "seconds": 0.0, "notes": []})
    ok = report.passed if report.when == "call" else False
    prev = entry["tests"].get(item.name, True)
    entry["tests"][item.name] = prev and ok
    entry["seconds"] += report.duration
    for key, value in item.user_properties:
        if key == "acceptance" and value not in entry["notes"]:
            entry["notes"].append(value)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_RESULTS):
        entry = _RESULTS[number]
        tests = entry["tests"]
        ok = all(tests.values())
        failed = [name for name, good in tests.items() if not good]
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {entry['title']}  ({entry['seconds']:.2f}s"
        line += f", failing: {', '.join(failed)})" if failed else ")"
        tr.write_line(line)
        for note in entry["notes"]:
            tr.write_line(f"    {note}")
