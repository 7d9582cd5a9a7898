import pytest

# criterion number -> (all tests so far passed, title)
_CRITERIA: dict[int, tuple[bool, str]] = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "criterion(num, title): marks a test as covering one acceptance criterion; "
        "a per-criterion pass/fail line is printed in the terminal summary",
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    num, title = marker.args
    ok, _ = _CRITERIA.get(num, (True, title))
    if report.when == "call":
        ok = ok and report.passed
    elif report.failed or report.skipped:
        # setup/teardown errors and skips both mean the criterion was not shown
        ok = False
    _CRITERIA[num] = (ok, title)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        ok, title = _CRITERIA[num]
        terminalreporter.write_line(
            f"criterion {num} {'PASS' if ok else 'FAIL'} - {title}"
        )
