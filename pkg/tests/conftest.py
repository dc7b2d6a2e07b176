import math

import numpy as np
import pytest

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n, title = marker.args
    if report.when == "call" or (report.when == "setup" and not report.passed):
        entry = _CRITERIA.setdefault(n, {"title": title, "passed": True, "tests": 0})
        entry["tests"] += 1
        entry["passed"] = entry["passed"] and report.passed


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        entry = _CRITERIA[n]
        status = "PASS" if entry["passed"] else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {status}  {entry['title']} ({entry['tests']} checks)")


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def random_local_symplectic(rng, max_squeeze=1.0):
    """Block-diagonal S1 (+) S2 with each block R(a) diag(e^s, e^-s) R(b)."""
    blocks = []
    for _ in range(2):
        a, b = rng.uniform(0, 2 * math.pi, 2)
        s = rng.uniform(-max_squeeze, max_squeeze)
        ra = np.array([[math.cos(a), math.sin(a)], [-math.sin(a), math.cos(a)]])
        rb = np.array([[math.cos(b), math.sin(b)], [-math.sin(b), math.cos(b)]])
        blocks.append(ra @ np.diag([math.exp(s), math.exp(-s)]) @ rb)
    out = np.zeros((4, 4))
    out[:2, :2] = blocks[0]
    out[2:, 2:] = blocks[1]
    return out


def brute_force_nu(sigma):
    """Smallest |eigenvalue| of i Omega sigma~ with sigma~ the partial transpose."""
    omega = np.kron(np.eye(2), np.array([[0.0, 1.0], [-1.0, 0.0]]))
    p = np.diag([1.0, 1.0, 1.0, -1.0])
    pt = p @ np.asarray(sigma, float) @ p
    return float(np.min(np.abs(np.linalg.eigvals(1j * omega @ pt)))) * 2
