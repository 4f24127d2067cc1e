import re

import numpy as np
import pytest

import rnmoments as rn

# one-line verdicts for the acceptance suite, printed by the terminal
# summary hook below so they survive output capture
ACCEPTANCE_NAMES = {
    1: "constant fidelity",
    2: "ratio-estimator boundedness",
    3: "boundary oscillation ordering",
    4: "least-squares span exactness",
    5: "derivative path correctness",
    6: "sign preservation",
    7: "cross-basis byte equivalence",
    8: "spectral identities",
    9: "eigenvalue-count totals",
    10: "scale check",
}

_CRITERION_RE = re.compile(r"test_criterion_0*(\d+)")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    status_by_criterion = {}
    rank = {"passed": 0, "skipped": 1, "failed": 2, "error": 2}
    for status in ("passed", "skipped", "failed", "error"):
        for rep in terminalreporter.stats.get(status, ()):
            m = _CRITERION_RE.search(getattr(rep, "nodeid", ""))
            if m is None or getattr(rep, "when", "call") != "call":
                continue
            num = int(m.group(1))
            prev = status_by_criterion.get(num)
            if prev is None or rank[status] > rank[prev]:
                status_by_criterion[num] = status
    if not status_by_criterion:
        return
    terminalreporter.write_line("")
    terminalreporter.write_line("acceptance summary:")
    for num in sorted(status_by_criterion):
        verdict = "PASS" if status_by_criterion[num] == "passed" else (
            "SKIP" if status_by_criterion[num] == "skipped" else "FAIL"
        )
        name = ACCEPTANCE_NAMES.get(num, "?")
        terminalreporter.write_line(f"  criterion {num:2d} ({name}): {verdict}")


def runge(x):
    return 1.0 / (1.0 + 25.0 * x * x)


def runge_deriv(x):
    return -50.0 * x / (1.0 + 25.0 * x * x) ** 2


@pytest.fixture(scope="session")
def gauss1000():
    return rn.gauss_legendre_measure(1000)


@pytest.fixture(scope="session")
def runge_ms(gauss1000):
    """Runge-function moment set: Chebyshev, N=7, Gauss-1000."""
    return rn.MomentSet.from_function_1d(runge, gauss1000, rn.CHEBYSHEV, 7)


@pytest.fixture(scope="session")
def random_image_16():
    rng = np.random.default_rng(99)
    raw = rng.integers(0, 256, size=(16, 16), dtype=np.uint8)
    return rn.GrayImage.from_array(raw / 255.0)


def gradient_image(d):
    """Smooth deterministic d-by-d test image."""
    t = np.arange(d) / (d - 1)
    x, y = np.meshgrid(t, t)
    return rn.GrayImage.from_array(0.2 + 0.6 * x * y + 0.15 * np.sin(4 * x))


def disk_image(d):
    """Gradient plus an off-span disk: sharp edge that makes least squares ring."""
    t = np.arange(d) / (d - 1)
    x, y = np.meshgrid(t, t)
    arr = 0.2 + 0.3 * (x + y) + 0.35 * (((x - 0.5) ** 2 + (y - 0.5) ** 2) < 0.09)
    return rn.GrayImage.from_array(np.clip(arr, 0.0, 1.0))
