import numpy as np
import pytest

# criterion number -> (title, outcome, details)
_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by a test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    entry = _CRITERIA.setdefault(number, {"title": title, "passed": True, "ran": False, "details": []})
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        entry["ran"] = True
        if not rep.passed:
            entry["passed"] = False
    for name, value in getattr(item, "user_properties", []):
        if name == "detail" and value not in entry["details"]:
            entry["details"].append(value)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        status = "PASS" if entry["passed"] and entry["ran"] else "FAIL"
        line = f"{status}  criterion {number:2d}: {entry['title']}"
        if entry["details"]:
            line += "  [" + "; ".join(entry["details"]) + "]"
        terminalreporter.write_line(line)


@pytest.fixture
def detail(request):
    """Attach a short measurement to the acceptance summary line."""
    def add(text: str):
        request.node.user_properties.append(("detail", text))
    return add


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)
