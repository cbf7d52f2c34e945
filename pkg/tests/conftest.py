import dataclasses

import pytest

from sssim.constants import EV, NIOBIUM, default_barrier
from sssim.junction import JunctionDevice
from sssim.noise import NoiseParams


@pytest.fixture
def niobium():
    return NIOBIUM


@pytest.fixture
def barrier():
    return default_barrier()


@pytest.fixture
def pa_device(barrier):
    """1 um^2 junction whose critical current clamps at 20 mA under gate drive."""
    return JunctionDevice(NIOBIUM, barrier, 1e-12)


@pytest.fixture
def lna_device(barrier):
    """0.1 um^2 junction with I_C ~ 1 mA, below a 2 mA bias."""
    return JunctionDevice(NIOBIUM, dataclasses.replace(barrier, V0_base=1.2 * EV), 1e-13)


@pytest.fixture
def noise_params(barrier):
    return NoiseParams(NIOBIUM, dataclasses.replace(barrier, V0_base=6.0 * EV))
