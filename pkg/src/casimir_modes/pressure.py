"""Matsubara sums, transverse-wavenumber integration and limit studies.

Per-mode contributions are in Pa per unit transverse-mode measure
``d^2k / (2 pi)^2`` (i.e. J/m after the angular integration is undone);
``pressure_total`` integrates them with ``k dk / 2 pi``.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate as sp_integrate

from .cavity import CavityConfig, closed_loop
from .errors import InvalidConfigurationError
from .materials import TE, TM, Kind, Polarization
from .quadrature import integrate
from .quantities import C, HBAR, K_B, NM, angular_to_ev

# exp(-40) ~ 4e-18: last retained Matsubara term is far below 1e-12 of the sum
_TAIL_EXPONENT = 40.0
_BLOCK = 256


class Formula(str, enum.Enum):
    PRIMED = "matsubara_primed"
    DOUBLE_PRIMED = "matsubara_double_primed"
    REAL_AXIS = "real_axis"
    IDEAL = "ideal_casimir"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        aliases = {"primed": cls.PRIMED, "corrected": cls.DOUBLE_PRIMED, "double-primed": cls.DOUBLE_PRIMED,
                   "real-axis": cls.REAL_AXIS, "ideal": cls.IDEAL}
        return aliases.get(str(value), None) or cls(str(value))


@dataclass
class PressureResult:
    value: float
    formula: Formula
    breakdown: dict = field(default_factory=dict)
    error_estimate: float = 0.0
    cfg: CavityConfig | None = None
    n_terms: int = 0

    def to_dict(self):
        cfg = self.cfg
        return {
            "value_pa": float(self.value),
            "formula": self.formula.value,
            "model": cfg.model.kind.value if cfg else None,
            "L_nm": cfg.L / NM if cfg else None,
            "T_K": cfg.T if cfg else None,
            "omega_p_ev": float(angular_to_ev(cfg.model.omega_p)) if cfg else None,
            "gamma_ev": float(angular_to_ev(cfg.model.gamma)) if cfg else None,
            "n_terms": int(self.n_terms),
            "error_estimate": float(self.error_estimate),
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def matsubara_count(cfg: CavityConfig, max_terms=None) -> int:
    """Number of Matsubara frequencies kept for gap ``cfg.L``."""
    x1 = 2.0 * cfg.thermal_frequency * cfg.L / C
    n = int(math.ceil(_TAIL_EXPONENT / x1)) + 2
    n = max(n, 8)
    return min(n, max_terms) if max_terms else n


def _weights(pol, n_terms, weighting):
    w = np.ones(n_terms)
    if weighting == "primed":
        w[0] = 0.5
    elif weighting == "double_primed":
        w[0] = 0.0 if Polarization.parse(pol) is TE else 0.5
    else:
        raise ValueError(f"unknown weighting {weighting!r}")
    return w


def matsubara_terms(cfg: CavityConfig, k, pol, n_terms, n_start=0):
    """``kappa_n f(i xi_n)`` for ``n_start <= n < n_start + n_terms``.

    Output shape is ``(n_terms,) + shape(k)``; values are real.
    """
    k = np.asarray(k, dtype=float)
    n = np.arange(n_start, n_start + n_terms).reshape((-1,) + (1,) * k.ndim)
    xi = n * cfg.thermal_frequency
    kappa = np.sqrt(k * k + (xi / C) ** 2)
    f = np.asarray(closed_loop(cfg, k, pol, 1j * xi))
    return kappa * f.real


def matsubara_contribution(cfg: CavityConfig, k, pol, weighting="primed", max_terms=None):
    """``-2 k_B T sum_n w_n kappa_n f(i xi_n)`` for one mode family ``(k, pol)``."""
    n_terms = matsubara_count(cfg, max_terms)
    phi = matsubara_terms(cfg, k, pol, n_terms)
    w = _weights(pol, n_terms, weighting).reshape((-1,) + (1,) * np.ndim(k))
    total = -2.0 * K_B * cfg.T * np.sum(w * phi, axis=0)
    return total[()] if np.ndim(total) == 0 else total


def matsubara_contribution_drude(cfg: CavityConfig, k, pol, max_terms=None):
    """Standard (primed) Matsubara sum for the lossy Drude model."""
    if cfg.model.kind is not Kind.DRUDE:
        raise InvalidConfigurationError("Drude contribution requires gamma > 0")
    if Polarization.parse(pol) is TE:
        zeroth = matsubara_terms(cfg, k, TE, 1)
        # analytically zero; a failure here means the wavevector branches are wrong
        assert np.all(np.abs(zeroth) < 1e-14 * np.maximum(np.abs(k), 1.0)), zeroth
    return matsubara_contribution(cfg, k, pol, "primed", max_terms)


def matsubara_contribution_corrected(cfg: CavityConfig, k, pol, max_terms=None):
    """Double-primed sum for the plasma model: the TE ``n = 0`` term is dropped."""
    if cfg.model.kind is not Kind.PLASMA:
        raise InvalidConfigurationError("corrected contribution requires the plasma model")
    return matsubara_contribution(cfg, k, pol, "double_primed", max_terms)


def te_zero_gap(cfg: CavityConfig, k):
    """Per-mode difference corrected minus primed: ``k_B T k f_TE(0)``."""
    f0 = np.asarray(closed_loop(cfg, k, TE, 0.0)).real
    out = K_B * cfg.T * np.asarray(k) * f0
    return out[()] if np.ndim(out) == 0 else out


def ideal_casimir(L):
    """Perfect-mirror, zero-temperature pressure ``-hbar c pi^2 / (240 L^4)``."""
    if not L > 0:
        raise InvalidConfigurationError("L must be positive")
    return -HBAR * C * math.pi**2 / (240.0 * L**4)


_U_EDGES = (0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0)


def _integrate_u(cfg, fn_u, rtol, atol_hint=0.0):
    """Integrate ``fn_u`` over ``u = 2 k L`` in growing panels until the tail is negligible."""
    total = None
    err = 0.0
    edges = list(_U_EDGES)
    lo = 0
    while True:
        a, b = edges[lo], edges[lo + 1]
        v, e = integrate(fn_u, a, b, rtol=rtol, atol=max(atol_hint, 0.0) * (b - a) / 64.0,
                         label=f"u-panel [{a}, {b}]")
        total = v if total is None else total + v
        err += e
        running = float(np.sum(np.abs(total)))
        lo += 1
        if lo + 1 >= len(edges):
            edges.append(2 * edges[-1])
        if b >= 8.0 and float(np.sum(np.abs(v))) < 1e-12 * running:
            return total, err, b
        if b > 4096:
            return total, err, b


def _matsubara_pressure(cfg, weighting, rtol, max_terms):
    n_terms = matsubara_count(cfg, max_terms)
    per_n = np.zeros((2, n_terms))
    err = 0.0
    scale = 0.0
    for start in range(0, n_terms, _BLOCK):
        count = min(_BLOCK, n_terms - start)
        w = np.stack([_weights(p, n_terms, weighting)[start:start + count] for p in (TE, TM)])

        def fn(u):
            k = u / (2.0 * cfg.L)
            rows = [matsubara_terms(cfg, k, p, count, start) for p in (TE, TM)]
            phi = np.stack(rows)  # (2, count, *u.shape)
            jac = k / (2.0 * math.pi) / (2.0 * cfg.L)
            return (-2.0 * K_B * cfg.T) * w.reshape(w.shape + (1,) * u.ndim) * phi * jac

        v, e, _ = _integrate_u(cfg, fn, rtol, atol_hint=rtol * scale)
        per_n[:, start:start + count] = v
        err += e
        scale = max(scale, float(np.sum(np.abs(per_n))))
        if start > 0 and float(np.sum(np.abs(v))) < 1e-14 * scale:
            break
    return per_n, err, n_terms


def _real_axis_pressure(cfg, rtol, nodes=8):
    from . import spectral

    x, w = np.polynomial.legendre.leggauss(nodes)
    xl, wl = np.polynomial.legendre.leggauss(nodes // 2)
    edges = np.array([0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 48.0])

    def contribution(u, pol, floor):
        k = u / (2.0 * cfg.L)
        if cfg.model.kind is Kind.PLASMA:
            val = spectral.real_axis_pressure_plasma(cfg, k, pol, tol=rtol, atol=floor).total
        else:
            val = spectral.real_axis_pressure_drude(cfg, k, pol, tol=rtol, atol=floor)
        return val

    parts = {}
    err = 0.0
    for pol in (TE, TM):
        hi_sum = lo_sum = 0.0
        # the per-mode values decay like exp(-u); far out only an absolute accuracy makes sense
        peak = 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            mid, half = 0.5 * (a + b), 0.5 * (b - a)
            pts = np.concatenate([mid + half * x, mid + half * xl])
            vals = []
            for u in pts:
                v = contribution(u, pol, 1e-3 * rtol * peak)
                peak = max(peak, abs(v))
                vals.append(v * (u / (2.0 * cfg.L)) / (2.0 * math.pi) / (2.0 * cfg.L))
            vals = np.array(vals)
            hi_sum += half * float(vals[:nodes] @ w)
            lo_sum += half * float(vals[nodes:] @ wl)
        parts[pol.value] = hi_sum
        err += abs(hi_sum - lo_sum)
    return parts, err


def pressure_total(cfg: CavityConfig, formula=Formula.PRIMED, rtol=1e-9, max_terms=None) -> PressureResult:
    """Casimir pressure (Pa, negative = attractive) by the chosen formula."""
    formula = Formula.parse(formula)
    if formula is Formula.IDEAL:
        return PressureResult(ideal_casimir(cfg.L), formula, cfg=cfg)
    if formula is Formula.DOUBLE_PRIMED and cfg.model.kind is not Kind.PLASMA:
        raise InvalidConfigurationError("the double-primed sum applies to the plasma model")
    if formula is Formula.REAL_AXIS:
        parts, err = _real_axis_pressure(cfg, min(rtol * 10, 1e-6))
        return PressureResult(parts["te"] + parts["tm"], formula, breakdown=parts, error_estimate=err, cfg=cfg)
    weighting = "primed" if formula is Formula.PRIMED else "double_primed"
    per_n, err, n_terms = _matsubara_pressure(cfg, weighting, rtol, max_terms)
    breakdown = {"te": float(per_n[0].sum()), "tm": float(per_n[1].sum()), "per_n": per_n.sum(axis=0)}
    return PressureResult(float(per_n.sum()), formula, breakdown=breakdown, error_estimate=err, cfg=cfg, n_terms=n_terms)


def te_zero_difference(cfg: CavityConfig) -> float:
    """``(k_B T / 2 pi) int k^2 f_TE(0, k) dk``: primed minus double-primed, in magnitude.

    Integrated independently of ``pressure_total`` with QUADPACK.
    """
    if cfg.model.kind is not Kind.PLASMA:
        raise InvalidConfigurationError("the TE zero-frequency term is nonzero only for the plasma model")

    def integrand(u):
        k = u / (2.0 * cfg.L)
        return k * te_zero_gap(cfg, k) / (2.0 * math.pi) / (2.0 * cfg.L)

    val, _ = sp_integrate.quad(integrand, 0.0, np.inf, epsabs=0.0, epsrel=1e-12, limit=400)
    return float(val)


@dataclass(frozen=True)
class LimitRow:
    gamma: float
    p_drude: float
    p_plasma_corrected: float
    p_plasma_primed: float

    @property
    def gap_corrected(self) -> float:
        return abs(self.p_drude - self.p_plasma_corrected)

    @property
    def gap_primed(self) -> float:
        return abs(self.p_drude - self.p_plasma_primed)


def gamma_limit_study(cfg_plasma: CavityConfig, gamma_sequence, rtol=1e-10):
    """Drude pressure along a decreasing damping sequence against both plasma formulas."""
    if cfg_plasma.model.kind is not Kind.PLASMA:
        raise InvalidConfigurationError("gamma_limit_study takes the plasma configuration as reference")
    gammas = [float(g) for g in gamma_sequence]
    if any(g <= 0 for g in gammas):
        raise InvalidConfigurationError("gamma sequence must be strictly positive (gamma = 0 is the plasma reference)")
    if any(b >= a for a, b in zip(gammas, gammas[1:])):
        raise InvalidConfigurationError("gamma sequence must be strictly descending")
    p_corr = pressure_total(cfg_plasma, Formula.DOUBLE_PRIMED, rtol).value
    p_primed = pressure_total(cfg_plasma, Formula.PRIMED, rtol).value
    rows = []
    for g in gammas:
        p_d = pressure_total(cfg_plasma.with_gamma(g), Formula.PRIMED, rtol).value
        rows.append(LimitRow(g, p_d, p_corr, p_primed))
    return rows
