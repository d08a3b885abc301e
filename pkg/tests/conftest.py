import math

import numpy as np

from wigg2.states import CovarianceMatrix, GaussianState, PhasePoint


def random_physical_state(rng, max_mean=3.0, max_anisotropy=math.e ** 2,
                          max_nbar=5.0, pure=False):
    """Random Gaussian state satisfying det V >= 1/4.

    Built as a rotated diagonal covariance diag(a, b) with a*b >= 1/4
    plus a random mean; `pure` forces det V = 1/4 exactly.
    """
    ratio = math.exp(rng.uniform(-0.5, 0.5) * math.log(max_anisotropy))
    if pure:
        geo = 0.5
    else:
        nbar = rng.uniform(0.0, max_nbar)
        geo = nbar + 0.5
    a = geo * ratio
    b = geo / ratio
    th = rng.uniform(0.0, math.pi)
    c, s = math.cos(th), math.sin(th)
    vxx = a * c * c + b * s * s
    vpp = a * s * s + b * c * c
    vxp = (a - b) * c * s
    mean = rng.uniform(-max_mean, max_mean, size=2)
    return GaussianState(PhasePoint(mean[0], mean[1]),
                         CovarianceMatrix(vxx, vpp, vxp))


# collected by the acceptance suite; echoed after the run so the
# per-criterion pass/fail lines are visible even with output capture on
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
