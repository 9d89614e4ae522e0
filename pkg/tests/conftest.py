import collections

import pytest

_RESULTS = collections.defaultdict(lambda: {"passed": 0, "failed": 0, "seconds": 0.0})


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion the test belongs to")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n = mark.args[0]
    if rep.when == "call":
        _RESULTS[n]["seconds"] += rep.duration
    if rep.failed:
        _RESULTS[n]["failed"] += 1
    elif rep.when == "call" and rep.passed:
        _RESULTS[n]["passed"] += 1


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RESULTS):
        r = _RESULTS[n]
        status = "FAIL" if r["failed"] else "PASS"
        terminalreporter.write_line(
            f"criterion {n:2d}: {status}  ({r['passed']} passed, {r['failed']} failed, {r['seconds']:.2f} s)")
