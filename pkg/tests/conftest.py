import time

import pytest
from hypothesis import settings

# enumeration-heavy examples can exceed the default per-example deadline on a loaded machine
settings.register_profile("default", deadline=None)
settings.load_profile("default")

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def criterion(request):
    """Record the outcome of one acceptance criterion for the summary."""
    number = request.node.get_closest_marker("criterion").args[0]
    state = {"detail": ""}
    start = time.perf_counter()

    def note(text):
        state["detail"] = text

    yield note
    elapsed = time.perf_counter() - start
    failed = getattr(request.node, "rep_call", None) is None or request.node.rep_call.failed
    ACCEPTANCE[number] = (not failed, f"{state['detail']} [{elapsed:.1f}s]")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
