"""Collects acceptance outcomes and prints one PASS/FAIL line per criterion."""
import time

import pytest

_RESULTS: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): numbered acceptance criterion")


class Criterion:
    def __init__(self):
        self.notes: list = []

    def note(self, text: str) -> None:
        self.notes.append(text)


@pytest.fixture
def criterion(request):
    crit = Criterion()
    request.node._criterion = crit
    request.node._started = time.perf_counter()
    return crit


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or rep.when != "call" and not rep.failed:
        return
    number, title = marker.args
    crit = getattr(item, "_criterion", None)
    elapsed = time.perf_counter() - getattr(item, "_started", time.perf_counter())
    notes = "; ".join(crit.notes) if crit else ""
    if rep.failed:
        msg = str(rep.longrepr.reprcrash.message).splitlines()[0] if hasattr(rep.longrepr, "reprcrash") else "error"
        notes = f"{notes}; {msg}" if notes else msg
    _RESULTS[number] = ("FAIL" if rep.failed else "PASS", title, notes, elapsed)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        status, title, notes, elapsed = _RESULTS[number]
        terminalreporter.write_line(f"{status} {number:>2}. {title} [{elapsed:.2f} s] {notes}".rstrip())
    passed = sum(1 for r in _RESULTS.values() if r[0] == "PASS")
    terminalreporter.write_line(f"{passed}/{len(_RESULTS)} criteria passed")
