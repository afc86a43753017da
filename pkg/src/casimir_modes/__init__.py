"""Thermal Casimir pressure between metallic mirrors from its complex-frequency structure.

The spectral density of each cavity mode is analysed along real and
imaginary frequencies: Matsubara sums, real-axis principal values with
Sokhotsky terms, argument-principle counts and eddy-current pole
trajectories, for lossy (Drude) and lossless (plasma) mirrors.
"""
from .cavity import CavityConfig, ModeCoordinate, closed_loop, energy_ratio, open_loop, photon_weight, spectral_density
from .errors import (CasimirError, IllConditionedContourError, InvalidConfigurationError, MissingSingularityError,
                     QuadratureError, SingularEvaluationError, WindowViolationError)
from .materials import TE, TM, DielectricModel, Kind, Polarization, fresnel_reflection, permittivity, slab_reflection
from .pressure import Formula, PressureResult, gamma_limit_study, ideal_casimir, pressure_total
from .quantities import CONSTANTS, ev_to_angular, matsubara_frequency

__version__ = "0.1.0"

__all__ = [
    "CavityConfig", "ModeCoordinate", "closed_loop", "energy_ratio", "open_loop", "photon_weight", "spectral_density",
    "CasimirError", "IllConditionedContourError", "InvalidConfigurationError", "MissingSingularityError",
    "QuadratureError", "SingularEvaluationError", "WindowViolationError",
    "TE", "TM", "DielectricModel", "Kind", "Polarization", "fresnel_reflection", "permittivity", "slab_reflection",
    "Formula", "PressureResult", "gamma_limit_study", "ideal_casimir", "pressure_total",
    "CONSTANTS", "ev_to_angular", "matsubara_frequency",
]
