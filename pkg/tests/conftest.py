import math

import pytest

from lvdisturb.model import Disturbance, NondimParams

OMEGA = 2 * math.pi / 12


@pytest.fixture
def sim_params():
    """Reference simulation coefficients; alpha=1 is the artifact default."""
    return NondimParams(beta=0.2, alpha=1.0, delta=0.066, q=1.0, effort_E=0.125, sigma=0.1, rho=0.05, mu=0.05)


@pytest.fixture
def sim_dist():
    return Disturbance(amp_prey_A=1.0, amp_pred_Abar=1.0, omega=OMEGA, phi=math.pi / 4)


@pytest.fixture
def decoupled():
    return NondimParams(beta=0.2, alpha=0.0, delta=0.066, q=1.0, effort_E=0.125, sigma=0.1, rho=0.0, mu=0.05)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
