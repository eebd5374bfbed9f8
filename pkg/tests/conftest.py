import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

_criteria: dict[int, tuple[str, str]] = {}
_notes: list[str] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion checked by the test")


def pytest_runtest_logreport(report):
    crit = getattr(report, "criterion", None)
    if crit is None:
        return
    number, title = crit
    if report.when == "call" or report.outcome != "passed":
        previous = _criteria.get(number, (title, "PASS"))[1]
        status = "PASS" if report.outcome == "passed" and previous == "PASS" else "FAIL"
        _criteria[number] = (title, status)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = tuple(marker.args)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, status = _criteria[number]
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {title}")
    if _notes:
        terminalreporter.section("acceptance report")
        for line in _notes:
            terminalreporter.write_line(line)


@pytest.fixture
def note():
    """Print a line now and repeat it in the terminal summary."""

    def emit(line: str) -> None:
        print(line)
        _notes.append(line)

    return emit


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
