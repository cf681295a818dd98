import time

import pytest
from hypothesis import settings

from elliptic_alignment.dynamics import PulseParams
from elliptic_alignment.scan import default_times, ellipticity_scan
from elliptic_alignment.thermal import EnsembleSpec, ensemble_trace

settings.register_profile("default", max_examples=40, deadline=None)
settings.register_profile("fast", max_examples=5, deadline=None)
settings.load_profile("default")

# a^2 = 1/3, xi = 11.1, T = 20: the optimal-ellipticity reference configuration
REF_A2, REF_XI, REF_T = 1.0 / 3.0, 11.1, 20.0

@pytest.fixture(scope="session")
def reference_spec():
    return EnsembleSpec(REF_T)

@pytest.fixture(scope="session")
def reference_trace(reference_spec):
    return ensemble_trace(reference_spec, PulseParams(REF_A2, REF_XI), default_times())

@pytest.fixture(scope="session")
def reference_scan(reference_spec):
    start = time.perf_counter()
    scan = ellipticity_scan(reference_spec, REF_XI)
    scan.meta["elapsed_s"] = time.perf_counter() - start
    return scan

_acceptance_lines = []

@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line per acceptance criterion for the summary."""
    record = {"label": request.node.name, "detail": ""}

    def note(label, detail):
        record["label"], record["detail"] = label, detail

    yield note
    rep = getattr(request.node, "rep_call", None)
    status = "PASS" if rep is not None and rep.passed else "FAIL"
    _acceptance_lines.append(f"{status}  {record['label']}: {record['detail']}")

@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep

def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
