"""Prints one pass/fail line per acceptance criterion at the end of the run."""

import pytest

_CRITERIA: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when not in ("setup", "call"):
        return
    number, title = marker.args
    entry = _CRITERIA.setdefault(number, {"title": title, "passed": True, "detail": []})
    if call.excinfo is not None:
        entry["passed"] = False
        entry["detail"].append(str(call.excinfo.value).splitlines()[0][:160])


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_logreport(report):
    yield
    if report.when != "call":
        return
    for name, value in report.user_properties:
        if name == "criterion_detail":
            number, text = value
            if number in _CRITERIA:
                _CRITERIA[number]["detail"].append(text)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        status = "PASS" if entry["passed"] else "FAIL"
        line = f"criterion {number:>2} {status}  {entry['title']}"
        if entry["detail"]:
            line += "  | " + "; ".join(entry["detail"])
        terminalreporter.write_line(line)
