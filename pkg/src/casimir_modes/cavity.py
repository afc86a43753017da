"""Fabry-Perot loop functions and the spectral density of one cavity mode.

A mode is addressed by ``(k, pol, z)``: transverse wavenumber (rad/m),
polarization and complex frequency (rad/s).  Arrays broadcast.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .errors import InvalidConfigurationError, SingularEvaluationError
from .materials import INF, DielectricModel, Polarization, slab_reflection, vacuum_kz
from .quantities import HBAR, K_B


class ModeCoordinate(NamedTuple):
    k: float
    pol: Polarization
    z: complex


@dataclass(frozen=True)
class CavityConfig:
    """Two identical metallic mirrors at distance ``L`` (m), temperature ``T`` (K).

    ``d`` is the slab width in metres; ``math.inf`` means semi-infinite bulk.
    """

    L: float
    T: float
    model: DielectricModel
    d: float = INF

    def __post_init__(self):
        if not (np.isfinite(self.L) and self.L > 0):
            raise InvalidConfigurationError("gap L must be positive")
        if not (np.isfinite(self.T) and self.T > 0):
            raise InvalidConfigurationError("temperature must be strictly positive")
        if not (self.d > 0):
            raise InvalidConfigurationError("slab width must be positive or inf")

    def with_model(self, model):
        return replace(self, model=model)

    def with_gamma(self, gamma):
        return replace(self, model=self.model.with_gamma(gamma))

    def with_width(self, d):
        return replace(self, d=d)

    @property
    def thermal_frequency(self) -> float:
        """First Matsubara frequency ``2 pi k_B T / hbar``."""
        return 2.0 * math.pi * K_B * self.T / HBAR


def open_loop(cfg: CavityConfig, k, pol, z, branch="physical"):
    """Round-trip amplitude ``rho = r^2 exp(2 i k_z L)``."""
    r = slab_reflection(cfg.model, z, k, pol, cfg.d, branch)
    kz = vacuum_kz(z, k, branch)
    return r * r * np.exp(2j * kz * cfg.L)


def _resum(rho):
    rho = np.asarray(rho)
    if np.any(rho == 1):
        raise SingularEvaluationError("closed loop evaluated on a cavity resonance (rho = 1)")
    f = rho / (1.0 - rho)
    return f[()] if f.ndim == 0 else f


def closed_loop(cfg: CavityConfig, k, pol, z, branch="physical"):
    """``f = rho / (1 - rho)``; its poles are the cavity resonances."""
    return _resum(open_loop(cfg, k, pol, z, branch))


def energy_ratio(cfg: CavityConfig, k, pol, omega, method="direct"):
    """Ratio of intracavity to external energy density for real ``omega``.

    ``method="direct"`` uses ``(1 - |rho|^2)/|1 - rho|^2``,
    ``method="closed_loop"`` uses ``1 + f + f*``.
    """
    omega = np.asarray(omega)
    if np.iscomplexobj(omega) and np.any(omega.imag != 0):
        raise ValueError("energy_ratio is defined for real frequencies only")
    rho = np.asarray(open_loop(cfg, k, pol, omega.real))
    if np.any(rho == 1):
        raise SingularEvaluationError("energy ratio evaluated on a cavity resonance")
    if method == "direct":
        g = (1.0 - np.abs(rho) ** 2) / np.abs(1.0 - rho) ** 2
    elif method == "closed_loop":
        g = 1.0 + 2.0 * _resum(rho).real
    else:
        raise ValueError(f"unknown method {method!r}")
    return g[()] if np.ndim(g) == 0 else g


def _coth(x):
    # overflow-free coth via exp(-2|Re x|) with oddness for Re x < 0
    sgn = np.where(x.real < 0, -1.0, 1.0)
    y = sgn * x
    e = np.exp(-2.0 * y)
    return sgn * (1.0 + e) / (1.0 - e)


def photon_weight(T, z):
    """``coth(hbar z / 2 k_B T)``: one half plus the thermal photon number, doubled.

    Raises
    ------
    SingularEvaluationError
        If ``z`` lies on (or within rounding of) a Matsubara pole; the
        error carries the pole index in ``index``.
    """
    if not T > 0:
        raise InvalidConfigurationError("temperature must be strictly positive")
    z = np.asarray(z, dtype=complex)
    x = HBAR * z / (2.0 * K_B * T)
    n = np.rint(x.imag / math.pi)
    dist = np.abs(x - 1j * math.pi * n)
    near = dist <= 1e-14 * np.maximum(1.0, np.abs(x))
    if np.any(near):
        idx = int(np.asarray(n)[near].ravel()[0])
        raise SingularEvaluationError(f"photon weight evaluated at Matsubara pole n={idx}", location=_first(z, near), index=idx)
    out = _coth(x)
    return out[()] if out.ndim == 0 else out


def _first(z, mask):
    return complex(np.asarray(z)[mask].ravel()[0]) if np.ndim(z) else complex(z)


def spectral_density(cfg: CavityConfig, k, pol, z, branch="physical"):
    """Pressure spectral density ``hbar k_z f C`` of mode ``(k, pol, z)``.

    The contribution of mode ``k, pol`` to the pressure is the integral of
    its real part over real frequencies with measure ``d omega / 2 pi``.
    """
    kz = vacuum_kz(z, k, branch)
    f = closed_loop(cfg, k, pol, z, branch)
    return HBAR * kz * f * photon_weight(cfg.T, z)


def matsubara_residue(cfg: CavityConfig, k, pol, n):
    """Residue of the spectral density at ``i xi_n``: ``2 i k_B T kappa_n f(i xi_n)``."""
    xi = n * cfg.thermal_frequency
    kappa = np.asarray(vacuum_kz(1j * xi, k)).imag
    f = closed_loop(cfg, k, pol, 1j * xi)
    return 2j * K_B * cfg.T * kappa * f
