import math

import pytest
from hypothesis import HealthCheck, settings

from casimir_modes.cavity import CavityConfig
from casimir_modes.materials import DielectricModel
from casimir_modes.quantities import ev_to_angular

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

GOLD_WP = ev_to_angular(9.0)
GOLD_GAMMA = ev_to_angular(0.035)
L_REF = 250e-9
T_REF = 300.0
K_GRID = [0.1 / L_REF, 0.5 / L_REF, 1.0 / L_REF, 2.0 / L_REF, 5.0 / L_REF]


@pytest.fixture
def drude_cfg():
    return CavityConfig(L_REF, T_REF, DielectricModel.drude(GOLD_WP, GOLD_GAMMA))


@pytest.fixture
def plasma_cfg():
    return CavityConfig(L_REF, T_REF, DielectricModel.plasma(GOLD_WP))


@pytest.fixture
def k_half():
    return 1.0 / (2.0 * L_REF)
