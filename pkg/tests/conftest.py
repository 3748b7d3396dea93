import warnings

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("symmid", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("symmid")


@pytest.fixture(autouse=True)
def _quiet_bound_warnings():
    # betti_formula warns below the variable bound; tests that care catch it explicitly
    with warnings.catch_warnings():
        warnings.filterwarnings("ignore", message=r"n=\d+ is below the bound")
        yield


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        title, ok, detail = RESULTS[number]
        terminalreporter.write_line(f"criterion {number:2d} [{'PASS' if ok else 'FAIL'}] {title}: {detail}")
