import numpy as np
import pytest

from umccev import kernels
from umccev.datasets import SynthSpec, synth_multiview

_RESULTS_KEY = pytest.StashKey[list]()


@pytest.fixture(scope="session")
def synth_data():
    """The default 3-cluster, 2-view union-of-subspaces fixture, unit-normalized."""
    return synth_multiview(SynthSpec()).normalized("unit")


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    return kernels.get_backend(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def acceptance(request):
    """``acceptance(criterion, status, detail)`` records one line for the summary.

    ``status`` is a bool (pass/fail) or the string ``"SKIP"``.
    """
    log = request.config.stash.setdefault(_RESULTS_KEY, [])

    def record(criterion, status, detail=""):
        if not isinstance(status, str):
            status = "PASS" if status else "FAIL"
        log.append((str(criterion), status, detail))

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = config.stash.get(_RESULTS_KEY, [])
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, status, detail in sorted(log, key=lambda r: r[0]):
        terminalreporter.write_line(f"[{status}] criterion {criterion}: {detail}")
