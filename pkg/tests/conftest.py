import time

import pytest

_ACCEPTANCE: dict[int, tuple[bool, str, float]] = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance line: call ``criterion(number, summary)`` before asserting."""
    state = {}

    def declare(number: int, summary: str):
        state["number"], state["summary"] = number, summary

    start = time.perf_counter()
    yield declare
    if "number" in state:
        rep = getattr(request.node, "rep_call", None)
        ok = rep is not None and rep.passed
        _ACCEPTANCE[state["number"]] = (ok, state["summary"], time.perf_counter() - start)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        ok, summary, secs = _ACCEPTANCE[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {summary} ({secs:.1f} s)")
