import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, text): acceptance criterion checked by a test")


def pytest_runtest_logreport(report):
    """Fold setup/call/teardown outcomes of criterion-marked tests into one verdict."""
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    n, text = marker
    ok = report.passed if report.when == "call" else not report.failed
    prev = _criteria.get(n, (text, True))
    _criteria[n] = (text, prev[1] and ok)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    # attach the criterion marker to the report so logreport can see it
    outcome = yield
    report = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is not None:
        report.criterion = tuple(m.args)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        text, ok = _criteria[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {text}")
