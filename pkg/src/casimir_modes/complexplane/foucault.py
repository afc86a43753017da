"""Eddy-current (Foucault) modes on the negative imaginary frequency axis.

Between ``-i gamma_tilde`` and ``-i gamma`` the permittivity is negative
enough that ``K_z`` is real.  For a slab of width ``d`` the reflection
amplitude then vanishes doubly wherever ``K d`` is a multiple of ``pi``
and ``1 - rho`` changes sign in between, which is how zeros and poles of
the spectral density are counted here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import optimize

from ..errors import InvalidConfigurationError, WindowViolationError
from ..materials import TE, Kind, Polarization
from ..quantities import C, HBAR, K_B
from .contour import ContourPath, circle, rectangle, winding_number
from ..io import write_csv
from .poles import PoleKind, PoleRecord


class FoucaultInterval(NamedTuple):
    """Imaginary parts bounding the interval: ``lower = -gamma_tilde``, ``upper = -gamma``.

    ``lower`` is the end nearer the origin.
    """

    lower: float
    upper: float

    @property
    def gamma_tilde(self) -> float:
        return -self.lower

    @property
    def gamma(self) -> float:
        return -self.upper


def gamma_tilde(model, k) -> float:
    """Root in ``(0, gamma)`` of ``x^3 - gamma x^2 + (c^2k^2 + omega_p^2) x - c^2k^2 gamma``."""
    g = model.gamma
    if not g > 0:
        raise InvalidConfigurationError("the eddy-current interval collapses to the origin for gamma = 0")
    ck2 = (C * k) ** 2
    if ck2 == 0:
        return 0.0
    cubic = lambda x: ((x - g) * x + ck2 + model.omega_p**2) * x - ck2 * g
    return float(optimize.brentq(cubic, 0.0, g, xtol=1e-16 * g, rtol=1e-15))


def gamma_tilde_asymptote(model, k) -> float:
    ck2 = (C * k) ** 2
    return model.gamma * ck2 / (ck2 + model.omega_p**2)


def foucault_interval(model, k) -> FoucaultInterval:
    return FoucaultInterval(-gamma_tilde(model, k), -model.gamma)


@dataclass(frozen=True)
class ContourFamily:
    c1: ContourPath
    c2: ContourPath
    c3: ContourPath

    def __getitem__(self, name):
        return {"c1": self.c1, "c2": self.c2, "c3": self.c3}[name.lower()]


def default_contours(cfg, k, pad=0.2) -> ContourFamily:
    """Contours around the origin (C1), the eddy-current interval (C2) and both (C3).

    C1 is a circle of radius ``gamma_tilde / 2``.  C2 is a rectangle of
    half-width ``gamma`` whose bottom edge sits ``pad (gamma - gamma_tilde)``
    below ``-i gamma`` and whose top edge is at ``-i gamma_tilde / 2``, so it
    shares no interior with C1.  C3 has the same width, the bottom of C2 and
    a top at ``i xi_1 / 4`` (between the origin and the first photon-weight
    zero).  Sizes refer to the zero of the photon weight at ``i xi_1 / 2``.
    """
    g = cfg.model.gamma
    gt = gamma_tilde(cfg.model, k)
    if gt == 0:
        raise InvalidConfigurationError("k = 0 leaves no room between the origin and the eddy-current interval")
    xi1 = cfg.thermal_frequency
    bottom = -g - pad * (g - gt)
    if bottom <= -0.5 * xi1:
        raise InvalidConfigurationError("eddy-current interval reaches the photon-weight zero at -i xi_1/2")
    top3 = 0.25 * xi1
    c1 = circle(0j, 0.5 * gt, name="C1")
    c2 = rectangle(-g, g, bottom, -0.5 * gt, name="C2")
    c3 = rectangle(-g, g, bottom, top3, name="C3")
    return ContourFamily(c1, c2, c3)


def count(cfg, k, pol, contour, tol=1e-6, full_output=False):
    """Zeros minus poles of the spectral density inside ``contour`` (name or path)."""
    from ..cavity import spectral_density

    if cfg.model.kind is not Kind.DRUDE:
        raise InvalidConfigurationError("contours are sized by gamma and need the Drude model")
    path = default_contours(cfg, k)[contour] if isinstance(contour, str) else contour
    fn = lambda z: spectral_density(cfg, k, pol, z)
    return winding_number(fn, path, tol=tol, full_output=full_output)


# --- census on the axis ----------------------------------------------------

def xi_of_K(model, k, K):
    """``xi`` in ``(gamma_tilde, gamma)`` where the medium wavenumber equals ``K``.

    Solves ``(K^2 c^2 + c^2 k^2 + xi^2)(gamma - xi) = omega_p^2 xi`` by vectorized
    bisection; the left side minus the right is decreasing in ``xi``.
    """
    K = np.asarray(K, dtype=float)
    g = model.gamma
    a = (C * K) ** 2 + (C * k) ** 2
    lo = np.full(K.shape, gamma_tilde(model, k))
    hi = np.full(K.shape, g)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        h = (a + mid * mid) * (g - mid) - model.omega_p**2 * mid
        pos = h > 0
        lo = np.where(pos, mid, lo)
        hi = np.where(pos, hi, mid)
        if np.all(hi - lo <= 4e-16 * g):
            break
    return 0.5 * (lo + hi)


def _loop_on_axis(cfg, k, pol, xi):
    from ..cavity import open_loop

    return np.real(np.asarray(open_loop(cfg, k, pol, -1j * np.asarray(xi))))


@dataclass
class TrajectoryPoint:
    d: float
    k: float
    record: PoleRecord
    label: str  # "dot" or "asterisk"
    group: int | None
    track: str
    trajectory_break: bool = False


@dataclass
class WidthCensus:
    d: float
    points: list = field(default_factory=list)
    matsubara: list = field(default_factory=list)
    zeros_minus_poles: int | None = None
    winding: int | None = None
    complete: bool = True

    @property
    def poles(self):
        return [p for p in self.points if p.record.is_pole]

    @property
    def zeros(self):
        return [p for p in self.points if p.record.is_zero]

    @property
    def dots(self):
        return [p for p in self.points if p.label == "dot"]

    @property
    def groups(self):
        return sorted({p.group for p in self.points if p.group is not None})


def _pole_residues(cfg, k, pol, xi):
    """Residues of the spectral density at ``-i xi`` from ``d rho / d xi`` on the axis."""
    xi = np.asarray(xi, dtype=float)
    h = 1e-7 * np.minimum(xi, cfg.model.gamma - xi)
    drho = (_loop_on_axis(cfg, k, pol, xi + h) - _loop_on_axis(cfg, k, pol, xi - h)) / (2 * h)
    kappa = np.sqrt(k * k + (xi / C) ** 2)
    cot = 1.0 / np.tan(HBAR * xi / (2.0 * K_B * cfg.T))
    # p = hbar (i kappa) f C with C(-i xi) = i cot and Res f = i / (d rho/d xi)
    return -1j * HBAR * kappa * cot / drho


def _bracketed_poles(cfg, k, pol, x_lo, x_hi, iters=60):
    """Vectorized bisection in ``xi`` on brackets where ``1 - rho`` changes sign.

    Sign changes through infinity (poles of ``rho`` itself, not of ``f``)
    are recognised by the size of ``1 - rho`` at convergence and dropped.
    """
    lo, hi = np.asarray(x_lo, dtype=float), np.asarray(x_hi, dtype=float)
    if lo.size == 0:
        return np.empty(0)
    s_lo = np.sign(1.0 - _loop_on_axis(cfg, k, pol, lo))
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        same = np.sign(1.0 - _loop_on_axis(cfg, k, pol, mid)) == s_lo
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    xi = 0.5 * (lo + hi)
    resid = np.abs(1.0 - _loop_on_axis(cfg, k, pol, xi))
    return np.sort(xi[resid < 1e-4])


def _poles_on_grid(cfg, k, pol, K):
    xi = xi_of_K(cfg.model, k, K)
    excess = 1.0 - _loop_on_axis(cfg, k, pol, xi)
    i = np.nonzero(np.sign(excess[:-1]) * np.sign(excess[1:]) < 0)[0]
    return _bracketed_poles(cfg, k, pol, xi[i], xi[i + 1])


def axis_census(cfg, k, pol=TE, max_groups=20000, samples=64, min_gap=1e-3):
    """Zeros and poles of the spectral density on the eddy-current interval for slab width ``cfg.d``.

    The window starts at ``-i gamma_tilde`` and ends just before the first
    zero not included, so it holds whole groups (one double zero followed by
    two poles toward ``-i gamma``).  Groups whose zero lies within
    ``min_gap * gamma`` of ``-i gamma`` are left out: they crowd into the
    essential singularity there.
    """
    model = cfg.model
    d = cfg.d
    if math.isinf(d):
        raise InvalidConfigurationError("the axis census needs a finite slab width")
    g = model.gamma
    x_edge = g * (1.0 - min_gap)
    K_edge = math.sqrt(max(model.omega_p**2 * x_edge / (C**2 * (g - x_edge)) - k * k - (x_edge / C) ** 2, 0.0))
    M = int(min(max_groups, math.floor(K_edge * d / math.pi)))
    period = math.pi / d
    K_end = (M + 1 - 1e-6) * period
    census = WidthCensus(d)

    # geometric sampling near K = 0; within each zero-to-zero period the
    # offsets are geometric as well, since the group poles hug their zero
    K_geo = np.geomspace(1e-9 * period, min(period, K_end), 400)
    u = np.unique(np.concatenate([[0.0], np.geomspace(1e-7, 1.0, samples, endpoint=False),
                                  np.linspace(0.0, 1.0, samples // 4, endpoint=False)]))
    K_lin = ((np.arange(0, M + 1)[:, None] + u[None, :]) * period).ravel()
    K = np.unique(np.concatenate([K_geo, K_lin[(K_lin > 0) & (K_lin < K_end)], [K_end]]))
    poles = _poles_on_grid(cfg, k, pol, K)
    zeros = xi_of_K(model, k, np.arange(1, M + 1) * period)

    group_of = np.searchsorted(zeros, poles)  # 0: before the first zero
    counts = np.bincount(group_of, minlength=M + 1)
    bad = [m for m in range(1, M + 1) if counts[m] != 2]
    if bad:
        # resample the offending periods finely
        fine = np.unique(np.concatenate([np.geomspace(1e-10, 1.0, 16 * samples), np.linspace(0.0, 1.0, 16 * samples)]))
        keep = ~np.isin(group_of, bad)
        extra = [_poles_on_grid(cfg, k, pol, (m + fine * (1 - 1e-6)) * period) for m in bad]
        poles = np.sort(np.concatenate([poles[keep], *extra]))
        group_of = np.searchsorted(zeros, poles)
        counts = np.bincount(group_of, minlength=M + 1)
    census.complete = all(counts[m] == 2 for m in range(1, M + 1))

    residues = _pole_residues(cfg, k, pol, poles) if poles.size else np.empty(0, complex)
    items = [(x, PoleRecord(-1j * x, -2, 0j, PoleKind.FOUCAULT), m) for m, x in enumerate(zeros, start=1)]
    items += [(x, PoleRecord(-1j * x, 1, complex(r), PoleKind.FOUCAULT), int(gm))
              for x, r, gm in zip(poles, residues, group_of)]
    items.sort(key=lambda t: t[0])
    seen = {}
    for x, rec, group in items:
        j = seen.get(group, 0)
        if group == 0:
            census.points.append(TrajectoryPoint(d, k, rec, "dot", None, f"dot{j}"))
        else:
            tag = "zero" if rec.is_zero else f"pole{j - 1}"
            census.points.append(TrajectoryPoint(d, k, rec, "asterisk", group, f"g{group}-{tag}"))
        seen[group] = j + 1
    census.matsubara = _matsubara_features(cfg, k)
    census.zeros_minus_poles = 2 * int(M) - int(poles.size)
    return census


def _matsubara_features(cfg, k):
    """Photon-weight poles and zeros lying inside the interval (excluded from the census)."""
    g = cfg.model.gamma
    gt = gamma_tilde(cfg.model, k)
    xi1 = cfg.thermal_frequency
    out = []
    n = 1
    while 0.5 * n * xi1 < g:
        x = 0.5 * n * xi1
        if x > gt:
            order = 1 if n % 2 == 0 else -1
            out.append(PoleRecord(-1j * x, order, None, PoleKind.MATSUBARA))
        n += 1
    return out


def trajectory_vs_width(cfg, k, d_grid, pol=TE, max_jump=0.5, with_winding=True, **census_kw):
    """Eddy-current zeros and poles for each slab width in ascending ``d_grid``.

    Points carry a track label: ``dot0``/``dot1`` for the lone poles nearest
    ``-i gamma_tilde`` and ``g<m>-zero``/``g<m>-pole`` for group ``m``.  Tracks
    are continued from one width to the next; a jump larger than
    ``max_jump * gamma`` is recorded as a trajectory break.  With
    ``with_winding`` the C2 winding number is evaluated at each width.
    """
    from ..cavity import spectral_density

    d_grid = [float(x) for x in d_grid]
    if cfg.model.kind is not Kind.DRUDE:
        raise InvalidConfigurationError("trajectories need gamma > 0")
    if any(b <= a for a, b in zip(d_grid, d_grid[1:])):
        raise InvalidConfigurationError("d_grid must be sorted ascending")
    out = []
    last = {}
    for d in d_grid:
        c = cfg.with_width(d)
        census = axis_census(c, k, pol, **census_kw)
        for p in census.points:
            if p.track in last and abs(last[p.track] - p.record.position.imag) > max_jump * cfg.model.gamma:
                p.trajectory_break = True
            last[p.track] = p.record.position.imag
        if with_winding:
            path = default_contours(c, k).c2
            census.winding = winding_number(lambda z: spectral_density(c, k, pol, z), path)
        out.append(census)
    return out


TRAJECTORY_COLUMNS = ("d_nm", "k_rad_per_m", "kind", "re_omega", "im_omega", "order", "re_residue", "im_residue",
                      "label", "track", "group", "resolved", "trajectory_break", "zeros_minus_poles", "winding")


def trajectory_rows(censuses):
    for cen in censuses:
        for p in cen.points:
            r = p.record
            res = r.residue if r.residue is not None else 0j
            yield (p.d * 1e9, p.k, r.kind.value, r.position.real, r.position.imag, r.order, res.real, res.imag,
                   p.label, p.track, "" if p.group is None else p.group, int(r.resolved and cen.complete),
                   int(p.trajectory_break), cen.zeros_minus_poles, "" if cen.winding is None else cen.winding)


def write_trajectory_csv(stream, rows):
    """RFC-4180 CSV with the header ``TRAJECTORY_COLUMNS``."""
    write_csv(stream, TRAJECTORY_COLUMNS, rows)
