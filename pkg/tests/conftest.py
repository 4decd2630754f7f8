import pytest


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion checked by the test")
    config._criteria = []


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    detail = dict(report.user_properties).get("detail", "")
    report.config_criteria.append((crit, report.passed, detail))


@pytest.hookimpl(tryfirst=True, hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    rep.config_criteria = item.config._criteria
    marker = item.get_closest_marker("criterion")
    if marker and not any(k == "criterion" for k, _ in rep.user_properties):
        rep.user_properties.append(("criterion", marker.args[0]))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not config._criteria:
        return
    terminalreporter.section("acceptance criteria")
    for crit, ok, detail in sorted(config._criteria):
        terminalreporter.write_line(f"{crit}: {'PASS' if ok else 'FAIL'}  {detail}")
