import re

_CRITERION = re.compile(r"test_criterion_(\d+)_(\w+?)(\[.*\])?$")
_results = {}


def pytest_runtest_logreport(report):
    match = _CRITERION.search(report.nodeid)
    if not match or (report.when != "call" and report.passed):
        return
    key = (int(match.group(1)), match.group(2))
    ok = report.passed and _results.get(key, True)
    _results[key] = ok


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for (num, name), ok in sorted(_results.items()):
        terminalreporter.write_line(f"criterion {num} {name.replace('_', ' ')}: {'PASS' if ok else 'FAIL'}")
