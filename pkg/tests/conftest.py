import numpy as np
import pytest

from chirpq.emitter import QubitSpec
from chirpq.pulse import pulse_from_ratios


@pytest.fixture(scope="session")
def fig2_pulse():
    """Addressing-figure parameters: omega0/omega_c=1.005, d_f=18 lambda0,
    sigma_f=0.35 lambda0, phi=0."""
    return pulse_from_ratios(1.005, 18.0, 0.35)


@pytest.fixture(scope="session")
def fig2_qubit(fig2_pulse):
    p = fig2_pulse
    return QubitSpec(omega_q=p.omega0, gamma=1e-6 * p.omega0, rabi0=0.038,
                     convention="rwa-max")


@pytest.fixture(scope="session")
def small_pulse():
    """Reduced-scale pulse for fast dynamics tests."""
    return pulse_from_ratios(1.005, 3.0, 0.35)


def assert_close(actual, expected, rtol=0.0, atol=0.0, label=""):
    actual = np.asarray(actual)
    expected = np.asarray(expected)
    np.testing.assert_allclose(actual, expected, rtol=rtol, atol=atol,
                               err_msg=label)
