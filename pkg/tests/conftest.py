import pytest

_acceptance = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(label): exit criterion, reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _acceptance.append((marker.args[0], item.name, rep.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for label, name, outcome in sorted(_acceptance):
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{status}] {label} ({name})")
