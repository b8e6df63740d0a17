import pytest

_criteria = {}


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            _criteria[item.nodeid] = [mark.args[0], mark.args[1], None]


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    entry = _criteria.get(item.nodeid)
    if entry is None:
        return
    if report.when == "call" or report.failed:
        if report.failed or entry[2] is None:
            entry[2] = report.passed


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed in sorted(_criteria.values()):
        status = "PASS" if passed else ("NOT RUN" if passed is None else "FAIL")
        terminalreporter.write_line(f"criterion {number}: {status:<7} {title}")
