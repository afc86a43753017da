"""Physical constants, unit conversions and frequency scaling."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import constants as _sc

from .errors import InvalidConfigurationError


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = _sc.hbar
    c: float = _sc.c
    k_B: float = _sc.k
    e: float = _sc.e


CONSTANTS = PhysicalConstants()
HBAR = CONSTANTS.hbar
C = CONSTANTS.c
K_B = CONSTANTS.k_B

NM = 1e-9


def ev_to_angular(energy_ev):
    """Angular frequency (rad/s) of a photon of energy ``energy_ev`` (eV)."""
    return np.asarray(energy_ev, dtype=float) * CONSTANTS.e / CONSTANTS.hbar


def angular_to_ev(omega):
    return np.asarray(omega, dtype=float) * CONSTANTS.hbar / CONSTANTS.e


def matsubara_frequency(n, T):
    """Matsubara frequency ``n * 2 pi k_B T / hbar`` in rad/s.

    Raises
    ------
    InvalidConfigurationError
        If ``T`` is not strictly positive.
    """
    if not np.isfinite(T) or T <= 0:
        raise InvalidConfigurationError(f"temperature must be strictly positive, got T={T}")
    n = np.asarray(n)
    if np.any(n < 0):
        raise InvalidConfigurationError("Matsubara index must be non-negative")
    return n * (2.0 * np.pi * K_B * T / HBAR)


@dataclass(frozen=True)
class FrequencyScale:
    """Reference frequency used to express complex frequencies near unity."""

    omega_ref: float

    def __post_init__(self):
        if not self.omega_ref > 0:
            raise InvalidConfigurationError("omega_ref must be positive")

    @property
    def length_ref(self) -> float:
        return C / self.omega_ref

    def to_dimensionless(self, z):
        return np.asarray(z) / self.omega_ref

    def from_dimensionless(self, w):
        return np.asarray(w) * self.omega_ref
