import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_orthogonal(n, rng):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def verdict(request):
    """Record one PASS/FAIL line for an acceptance criterion.

    Usage: ``verdict(k, "description", detail)`` before the assertions; the
    line flips to PASS only if the test finishes cleanly.
    """
    state = {}

    def record(k, text):
        state["k"], state["text"] = k, text
        ACCEPTANCE_LINES[k] = f"FAIL  [{k:2d}] {text}"

    yield record
    rep = getattr(request.node, "rep_call", None)
    if "k" in state and rep is not None and rep.passed:
        ACCEPTANCE_LINES[state["k"]] = f"PASS  [{state['k']:2d}] {state['text']}"


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
