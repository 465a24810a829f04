import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20181)


def dft_symplectic(n):
    """Real interleaved form of the unitary DFT, built entry by entry from complex exponentials."""
    out = np.zeros((2 * n, 2 * n))
    for j in range(n):
        for k in range(n):
            u = np.exp(2j * np.pi * j * k / n) / np.sqrt(n)
            out[2 * j:2 * j + 2, 2 * k:2 * k + 2] = [[u.real, -u.imag], [u.imag, u.real]]
    return out


def random_thermal_cov(rng, n_modes, n_max=3.0):
    """Random physical covariance: thermal diagonal conjugated by a random symplectic."""
    from gausscap.circuits import BeamSplitter, GaussianCircuit, PhaseRotation, TwoModeSqueeze, circuit_to_symplectic

    nus = 0.5 + rng.uniform(0, n_max, n_modes)
    diag = np.repeat(nus, 2)
    layers = []
    for _ in range(3):
        layers.append(tuple(PhaseRotation(m, rng.uniform(0, 2 * np.pi)) for m in range(n_modes)))
        if n_modes > 1:
            perm = rng.permutation(n_modes)
            pairs = [(int(perm[i]), int(perm[i + 1])) for i in range(0, n_modes - 1, 2)]
            layers.append(tuple(BeamSplitter(a, b, rng.uniform(0, np.pi)) for a, b in pairs))
            layers.append(tuple(TwoModeSqueeze(a, b, 1 + rng.uniform(0, 0.5)) for a, b in pairs))
    s = circuit_to_symplectic(GaussianCircuit(n_modes, layers))
    return s @ np.diag(diag) @ s.T, nus


ACCEPTANCE_RESULTS = {}


@pytest.fixture
def criterion(request):
    """Record a criterion's outcome and wall time for the end-of-run summary."""
    import time

    name = request.node.get_closest_marker("acceptance").args[0]
    record = {"name": name}
    start = time.perf_counter()
    yield record
    record["seconds"] = time.perf_counter() - start
    ACCEPTANCE_RESULTS.setdefault(request.node.nodeid, {}).update(record)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call" and item.get_closest_marker("acceptance"):
        ACCEPTANCE_RESULTS.setdefault(item.nodeid, {})["passed"] = report.passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for record in ACCEPTANCE_RESULTS.values():
        status = "PASS" if record.get("passed") else "FAIL"
        seconds = record.get("seconds")
        timing = f" [{seconds:.2f}s]" if seconds is not None else ""
        detail = f" - {record['detail']}" if record.get("detail") else ""
        terminalreporter.write_line(f"{status}  {record['name']}{timing}{detail}")
