import math

import pytest

from lzsim.dynamics import DriveSpec, ModulationSpec
from lzsim.xmon_model import QubitSpec

TWO_PI = 2.0 * math.pi


def mhz(f: float) -> float:
    """Angular frequency (rad/s) from an ordinary frequency in MHz."""
    return TWO_PI * f * 1e6


# Device constants at the operating bias point.
EC_GHZ = 0.264
EJ_GHZ = 13.822
GAMMA1 = 1.0 / 26.4e-6
GAMMA_PHI = 0.18e6


@pytest.fixture(scope="session")
def device_qubit() -> QubitSpec:
    return QubitSpec(EC_GHZ, EJ_GHZ, gamma1=GAMMA1, gamma_phi=GAMMA_PHI)


@pytest.fixture(scope="session")
def lossless_qubit() -> QubitSpec:
    return QubitSpec(EC_GHZ, EJ_GHZ)


@pytest.fixture(scope="session")
def fig4_mod() -> ModulationSpec:
    return ModulationSpec(amplitude=mhz(72.0), omega=mhz(1.44), phase=0.5 * math.pi)


@pytest.fixture(scope="session")
def fig4_drive() -> DriveSpec:
    return DriveSpec(rabi=mhz(26.2))


@pytest.fixture(scope="session")
def fig5_mod() -> ModulationSpec:
    return ModulationSpec(amplitude=mhz(63.75), omega=mhz(2.4), phase=0.5 * math.pi)


@pytest.fixture(scope="session")
def fig5_drive() -> DriveSpec:
    return DriveSpec(rabi=mhz(12.0))
