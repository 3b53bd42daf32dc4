import math

import numpy as np
import pytest

from rdctools import SampleLogDensities

LN_2PI = math.log(2 * math.pi)


def normal_logpdf(x, mean, var):
    return -0.5 * (LN_2PI + math.log(var) + (x - mean) ** 2 / var)


def gaussian_pair_logs(rho, n, seed, t_var=1.0):
    """Natural-log densities for X ~ N(0,1), U = rho X + sqrt(1-rho^2) Z.

    ``t_var`` is the variance of the variational marginal t(u); 1 is exact.
    """
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(n)
    u = rho * x + math.sqrt(1 - rho * rho) * rng.standard_normal(n)
    return normal_logpdf(u, rho * x, 1 - rho * rho), normal_logpdf(u, 0.0, t_var)


@pytest.fixture
def gaussian_complexity_samples():
    def make(rho=math.sqrt(0.5), n=10 ** 6, seed=0, t_var=1.0):
        lp, lt = gaussian_pair_logs(rho, n, seed, t_var)
        return SampleLogDensities(log_p_u_given_x=lp, log_t_u=lt)
    return make


ACCEPTANCE_LINES = []


def record_criterion(number, passed, detail):
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
