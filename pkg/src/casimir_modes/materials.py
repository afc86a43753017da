"""Dielectric models, longitudinal wavevectors and reflection amplitudes.

All functions accept scalars or numpy arrays (broadcast together) for the
complex frequency ``z`` (rad/s) and the transverse wavenumber ``k`` (rad/m).

Two determinations of the vacuum wavevector are used:

``"physical"``
    ``k_z = i sqrt(k^2 - z^2/c^2)``, cut along the real axis for
    ``|omega| > c k``.  Analytic around the origin and the imaginary axis,
    which is what contour work near ``z = 0`` needs.
``"upper"``
    ``k_z = (z/c) sqrt(1 - c^2 k^2 / z^2)``, cut along ``(-c k, c k)``.
    Identical to ``"physical"`` in the closed upper half-plane and analytic
    across the propagative part of the real axis, so it is the continuation
    to use for residues of real propagative poles.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidConfigurationError, SingularEvaluationError
from .quantities import C

INF = math.inf


class Kind(str, enum.Enum):
    DRUDE = "drude"
    PLASMA = "plasma"


class Polarization(str, enum.Enum):
    TE = "te"
    TM = "tm"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


TE = Polarization.TE
TM = Polarization.TM


@dataclass(frozen=True)
class DielectricModel:
    """Drude permittivity ``1 - omega_p^2 / (z (z + i gamma))``.

    ``gamma == 0`` is the lossless plasma model.  Frequencies in rad/s.
    """

    kind: Kind
    omega_p: float
    gamma: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if not (np.isfinite(self.omega_p) and self.omega_p > 0):
            raise InvalidConfigurationError("omega_p must be positive and finite")
        if not (np.isfinite(self.gamma) and self.gamma >= 0):
            raise InvalidConfigurationError("gamma must be non-negative and finite")
        if (self.kind is Kind.PLASMA) != (self.gamma == 0):
            raise InvalidConfigurationError("plasma kind requires gamma == 0 and drude requires gamma > 0")

    @classmethod
    def drude(cls, omega_p, gamma):
        return cls(Kind.DRUDE, float(omega_p), float(gamma))

    @classmethod
    def plasma(cls, omega_p):
        return cls(Kind.PLASMA, float(omega_p), 0.0)

    @property
    def static_conductivity(self) -> float:
        """``omega_p^2 / gamma`` (in units of epsilon_0 / s); infinite for plasma."""
        return self.omega_p**2 / self.gamma if self.gamma > 0 else INF

    def with_gamma(self, gamma) -> "DielectricModel":
        if gamma == 0:
            return DielectricModel.plasma(self.omega_p)
        return DielectricModel.drude(self.omega_p, gamma)


def _complex(x):
    return np.asarray(x, dtype=complex)


def _scalarize(x):
    return x[()] if isinstance(x, np.ndarray) and x.ndim == 0 else x


def permittivity(model: DielectricModel, z):
    """Relative permittivity at complex frequency ``z``.

    Raises
    ------
    SingularEvaluationError
        At ``z = 0`` or ``z = -i gamma`` where the model has poles.
    """
    z = _complex(z)
    den = z * (z + 1j * model.gamma)
    if np.any(den == 0):
        bad = z[den == 0] if z.ndim else z
        raise SingularEvaluationError("permittivity evaluated on one of its poles", location=_scalarize(np.asarray(bad).ravel()[0]))
    return _scalarize(1.0 - model.omega_p**2 / den)


def _chi_omega2(model, z):
    # (1 - eps) z^2 = omega_p^2 z / (z + i gamma), continued to z = 0
    with np.errstate(divide="ignore", invalid="ignore"):
        chi = model.omega_p**2 * z / (z + 1j * model.gamma)
    if model.gamma == 0:
        chi = np.where(z == 0, model.omega_p**2 + 0j, chi)
    return chi


def eps_omega2(model: DielectricModel, z):
    """``eps(z) z^2``, regular at ``z = 0``."""
    z = _complex(z)
    return z * z - _chi_omega2(model, z)


def _on_real_cut(z, w):
    # real z whose square-root argument sits on the negative real axis
    return (z.imag == 0) & (z.real != 0) & (w.imag == 0) & (w.real < 0)


def _retarded_root(z, w):
    """``i sqrt(w)`` with the limit from Im z > 0 taken on the real-axis cut."""
    root = 1j * np.sqrt(w)
    cut = _on_real_cut(z, w)
    if np.any(cut):
        root = np.where(cut, np.sign(z.real) * np.sqrt(np.abs(w.real)) + 0j, root)
    return root


def vacuum_kz(z, k, branch="physical"):
    """Longitudinal vacuum wavenumber for frequency ``z`` and transverse ``k``.

    Real positive for real ``z > c k``, ``+i sqrt(k^2 - z^2/c^2)`` on
    ``(0, c k)``, ``i kappa`` on the positive imaginary axis and real
    negative for ``z < -c k``.
    """
    z, k = np.broadcast_arrays(_complex(z), np.asarray(k, dtype=float))
    if branch == "physical":
        out = _retarded_root(z, k * k - (z / C) ** 2)
    elif branch == "upper":
        with np.errstate(divide="ignore", invalid="ignore"):
            out = (z / C) * np.sqrt(1.0 - (C * k / z) ** 2)
        out = np.where(z == 0, 1j * k, out)
    else:
        raise ValueError(f"unknown branch {branch!r}")
    return _scalarize(out)


def medium_Kz(model: DielectricModel, z, k):
    """Longitudinal wavenumber inside the metal, ``Im K_z >= 0``."""
    z, k = np.broadcast_arrays(_complex(z), np.asarray(k, dtype=float))
    w = k * k - eps_omega2(model, z) / C**2
    return _scalarize(_retarded_root(z, w))


def fresnel_reflection(model: DielectricModel, z, k, pol, branch="physical"):
    """Bulk vacuum/metal reflection amplitude for polarization ``pol``."""
    pol = Polarization.parse(pol)
    z, k = np.broadcast_arrays(_complex(z), np.asarray(k, dtype=float))
    kz = _complex(vacuum_kz(z, k, branch))
    Kz = _complex(medium_Kz(model, z, k))
    with np.errstate(divide="ignore", invalid="ignore"):
        if pol is TE:
            # (kz - Kz) written as (kz^2 - Kz^2)/(kz + Kz) to keep the small-z zero accurate
            s = kz + Kz
            r = _chi_omega2(model, z) / (C**2 * s * s)
            r = np.where((z == 0) & (k == 0), -1.0 + 0j, r)
            bad = s == 0
        else:
            # multiply through by z (z + i gamma) so that z = 0 is regular
            poly = z * (z + 1j * model.gamma)
            D = poly - model.omega_p**2
            num = D * kz - poly * Kz
            den = D * kz + poly * Kz
            r = num / den
            r = np.where((z == 0) & (k == 0), 1.0 + 0j, r)
            bad = den == 0
    if np.any(bad & ~((z == 0) & (k == 0))):
        loc = np.asarray(z)[bad].ravel()[0] if z.ndim else z
        raise SingularEvaluationError("vanishing Fresnel denominator", location=complex(loc))
    return _scalarize(r)


def slab_reflection(model: DielectricModel, z, k, pol, d=INF, branch="physical"):
    """Reflection amplitude of a metallic slab of width ``d`` (m) in vacuum.

    ``d = math.inf`` is exact bulk reflection.  For finite ``d`` the
    amplitude is even in ``K_z`` and therefore free of the medium cut.
    """
    r = _complex(fresnel_reflection(model, z, k, pol, branch))
    if math.isinf(d):
        return _scalarize(r)
    if not d > 0:
        raise InvalidConfigurationError("slab width must be positive")
    Kz = _complex(medium_Kz(model, z, k))
    e = np.exp(2j * Kz * d)
    den = 1.0 - r * r * e
    if np.any(den == 0):
        raise SingularEvaluationError("slab reflection denominator vanishes")
    return _scalarize(r * (1.0 - e) / den)
