import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

# criterion key -> [outcome or None, detail]
ACCEPTANCE_RESULTS: dict[str, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(key): acceptance criterion reported in the summary")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def record_criterion(request):
    marker = request.node.get_closest_marker("criterion")
    key = marker.args[0]
    ACCEPTANCE_RESULTS.setdefault(key, [None, ""])

    def record(detail):
        ACCEPTANCE_RESULTS[key][1] = detail

    return record


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    entry = ACCEPTANCE_RESULTS.setdefault(marker.args[0], [None, ""])
    entry[0] = report.passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS, key=lambda k: int(k.split()[0][2:])):
        passed, detail = ACCEPTANCE_RESULTS[key]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"{status}  {key}" + (f"  [{detail}]" if detail else ""))
