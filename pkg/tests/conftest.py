_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or report.failed:
        _acceptance[name] = _acceptance.get(name, True) and report.passed


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok in _acceptance.items():
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} {name}")
