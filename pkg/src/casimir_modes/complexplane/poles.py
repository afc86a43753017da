"""Isolation and refinement of poles and zeros, and real cavity resonances."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from ..errors import CasimirError, InvalidConfigurationError, QuadratureError, SingularEvaluationError
from .contour import circle, rectangle, residue_at, winding_number

# off-centre split fraction: keeps quadrisection edges off the symmetry axes
_SPLIT = 0.5 + 0.0317


class PoleKind(str, enum.Enum):
    FABRY_PEROT = "fabry_perot"
    PLASMONIC = "plasmonic"
    FOUCAULT = "foucault"
    MATSUBARA = "matsubara"
    ORIGIN = "origin"


@dataclass(frozen=True)
class PoleRecord:
    """A located singularity or zero.

    ``order`` is positive for poles and negative for zeros (a double zero
    has ``order == -2``).  Unresolved clusters carry the net count
    ``zeros - poles`` as ``-order`` and ``resolved=False``; their
    ``position`` is the cell centre and ``radius`` its half-diagonal.
    """

    position: complex
    order: int
    residue: complex | None = None
    kind: PoleKind | None = None
    resolved: bool = True
    radius: float = 0.0

    @property
    def is_pole(self) -> bool:
        return self.order > 0

    @property
    def is_zero(self) -> bool:
        return self.order < 0


def _safe_winding(fn, path, tol):
    try:
        return winding_number(fn, path, tol=tol)
    except CasimirError:
        return None


def _cell_winding(fn, x0, x1, y0, y1, tol):
    """Winding of a cell, nudging the cell edges if they run through a feature."""
    for shift in (0.0, 1e-3, -1.3e-3, 2.9e-3):
        dx, dy = shift * (x1 - x0), shift * (y1 - y0)
        n = _safe_winding(fn, rectangle(x0 + dx, x1 + dx, y0 + dy, y1 + dy), tol)
        if n is not None:
            return n
    return None


def _derivative(fn, z, h):
    return (fn(z + h) - fn(z - h)) / (2.0 * h)


def _newton(g, z, m, scale, iters=60):
    """Modified Newton for a root of multiplicity ``m``."""
    h = 1e-6 * scale
    with np.errstate(all="ignore"):
        return _newton_loop(g, z, m, scale, h, iters)


def _newton_loop(g, z, m, scale, h, iters):
    for _ in range(iters):
        try:
            gz = g(z)
            dg = _derivative(g, z, h)
        except SingularEvaluationError:
            # landed on the pole itself
            break
        if not np.isfinite(gz) or dg == 0 or not np.isfinite(dg):
            break
        step = m * gz / dg
        z = z - step
        if abs(step) <= 1e-14 * max(abs(z), scale):
            break
    return complex(z)


def _cell_has_poles(fn, x0, x1, y0, y1, tol):
    """Heuristic for cells whose zero and pole counts cancel.

    A nonzero boundary integral of ``fn`` itself betrays an enclosed pole;
    a boundary modulus spanning many decades betrays a nearby feature.
    """
    from .contour import contour_integral

    path = rectangle(x0, x1, y0, y1)
    try:
        pts = path.sample(64)
        mod = np.abs(np.asarray(fn(pts)))
        if not np.all(np.isfinite(mod)) or mod.min() == 0:
            return True
        if mod.max() / mod.min() > 1e4:
            return True
        val = contour_integral(fn, path, tol=1e-6)
        perim = 2.0 * ((x1 - x0) + (y1 - y0))
        return abs(val) > 1e-6 * perim * float(mod.max())
    except CasimirError:
        return True


def find_poles(fn, search_rect, tol, *, winding_tol=1e-6, max_depth=40, classify=None):
    """Locate poles and zeros of ``fn`` inside ``search_rect = (x0, x1, y0, y1)``.

    Cells are quadrisected (off-centre) while they contain something and
    are wider than ``tol``; isolated features are then refined by modified
    Newton iteration (on ``1/fn`` for poles, ``fn`` for zeros), their order
    is confirmed by a small-circle winding number and poles get a residue.
    Cells that still hold a mixture at ``max_depth`` are reported as
    unresolved clusters.

    ``classify(position, order)`` may assign a ``PoleKind``.
    """
    x0, x1, y0, y1 = map(float, search_rect)
    if not (x1 > x0 and y1 > y0):
        raise InvalidConfigurationError("search rectangle must have positive extent")
    n_total = _cell_winding(fn, x0, x1, y0, y1, winding_tol)
    if n_total is None:
        raise InvalidConfigurationError("search rectangle boundary passes through a pole or zero")
    records = []
    stack = [(x0, x1, y0, y1, n_total, 0)]
    while stack:
        a, b, c, d, n, depth = stack.pop()
        diam = math.hypot(b - a, d - c)
        nonempty = n != 0 or _cell_has_poles(fn, a, b, c, d, tol)
        if not nonempty:
            continue
        if abs(n) in (1, 2) and diam < tol and not _cell_has_mixture(fn, a, b, c, d, n, winding_tol):
            records.append(_refine(fn, a, b, c, d, n, winding_tol, classify))
            continue
        if depth >= max_depth or diam < 1e-3 * tol:
            records.append(PoleRecord(complex(0.5 * (a + b), 0.5 * (c + d)), -n, None,
                                          classify(complex(0.5 * (a + b), 0.5 * (c + d)), -n) if classify else None,
                                          resolved=False, radius=0.5 * diam))
            continue
        xm = a + _SPLIT * (b - a)
        ym = c + _SPLIT * (d - c)
        children = [(a, xm, c, ym), (xm, b, c, ym), (a, xm, ym, d), (xm, b, ym, d)]
        counts = [_cell_winding(fn, *ch, winding_tol) for ch in children]
        if any(cnt is None for cnt in counts):
            # split line hits a feature: retry with a different split
            xm = a + (1 - _SPLIT) * (b - a)
            ym = c + (1 - _SPLIT) * (d - c)
            children = [(a, xm, c, ym), (xm, b, c, ym), (a, xm, ym, d), (xm, b, ym, d)]
            counts = [_cell_winding(fn, *ch, winding_tol) for ch in children]
        for ch, cnt in zip(children, counts):
            if cnt is None:
                records.append(PoleRecord(complex(0.5 * (ch[0] + ch[1]), 0.5 * (ch[2] + ch[3])), 0, None, None,
                                          resolved=False, radius=0.5 * math.hypot(ch[1] - ch[0], ch[3] - ch[2])))
                continue
            stack.append((*ch, cnt, depth + 1))
    records.sort(key=lambda r: (r.position.imag, r.position.real))
    return records


def _cell_has_mixture(fn, a, b, c, d, n, tol):
    # a single net pole is taken at face value; net zeros must come without poles
    if n == -1:
        return False
    if n < 0:
        return True
    return _cell_has_poles(fn, a, b, c, d, tol)


def _refine(fn, a, b, c, d, n, tol, classify):
    scale = math.hypot(b - a, d - c)
    z0 = complex(0.5 * (a + b), 0.5 * (c + d))
    if n < 0:
        m = -n
        z = _newton(lambda w: 1.0 / fn(w), z0, m, scale)
    else:
        m = n
        z = _newton(fn, z0, m, scale)
    if not (a - scale <= z.real <= b + scale and c - scale <= z.imag <= d + scale):
        z = z0
    radius = 0.25 * scale
    order = _safe_winding(fn, circle(z, radius), tol)
    resolved = order == n
    residue = None
    if n == -1 and resolved:
        residue = residue_at(fn, z, radius)
    kind = classify(z, -n) if classify else None
    return PoleRecord(z, -n, residue, kind, resolved=resolved, radius=radius)


def _real_mode_phase(model, omega, k, pol, L):
    """Unwrapped round-trip phase on the lossless propagative window."""
    from ..materials import TE, Polarization
    from ..quantities import C

    kz = np.sqrt(np.maximum(omega**2 / C**2 - k * k, 0.0))
    Q = np.sqrt(np.maximum(k * k + (model.omega_p**2 - omega**2) / C**2, 0.0))
    if Polarization.parse(pol) is TE:
        a = kz
    else:
        a = (1.0 - model.omega_p**2 / omega**2) * kz
    with np.errstate(divide="ignore", invalid="ignore"):
        return 2.0 * kz * L + 4.0 * np.arctan2(a, Q)


def locate_real_modes(cfg, k, pol, indent=None, grid=4000):
    """Real resonances of the lossless cavity with ``omega >= 0``.

    Fabry-Perot modes solve ``Phi(omega) = 2 pi m`` on the propagative window
    ``(c k, sqrt(omega_p^2 + c^2 k^2))`` where ``|r| = 1``; surface-plasmon
    modes solve ``rho = 1`` on the evanescent sector (TM only).  The TE
    list starts with the origin pole.  Residues of the spectral density are
    taken on circles of radius ``indent`` (default ``1e-6 omega_p``); the
    mirror poles at ``-omega_m`` follow by symmetry and are not listed.
    """
    from ..cavity import open_loop, spectral_density
    from ..materials import TE, Kind, Polarization
    from ..quantities import C

    pol = Polarization.parse(pol)
    model = cfg.model
    if model.kind is not Kind.PLASMA:
        raise InvalidConfigurationError("real cavity modes exist only for the lossless plasma model")
    if not math.isinf(cfg.d):
        raise InvalidConfigurationError("real cavity modes require bulk mirrors (finite slabs transmit)")
    k = float(k)
    if k < 0:
        raise InvalidConfigurationError("k must be non-negative")
    ck = C * k
    top = math.sqrt(model.omega_p**2 + ck * ck)
    indent = 1e-6 * model.omega_p if indent is None else indent
    positions = []

    # propagative window: integer crossings of Phi / 2 pi; Phi(ck) = 0 is removable
    # and excluded by the open grid, but TM phases may return to 0 inside
    w = ck + (top - ck) * (0.5 - 0.5 * np.cos(np.linspace(0.0, math.pi, grid)))[1:-1]
    # TM: 4 atan2(eps k_z, Q) turns by 2 pi within ~ (ck / top)^4 of the band edge
    edge = top - (top - ck) * np.geomspace(1e-15, 1e-3, 600)
    w = np.unique(np.concatenate([w, edge[edge > ck]]))
    level = _real_mode_phase(model, w, k, pol, cfg.L) / (2.0 * math.pi)
    for i in range(level.size - 1):
        lo, hi = level[i], level[i + 1]
        for m in range(int(math.ceil(min(lo, hi))), int(math.floor(max(lo, hi))) + 1):
            if lo == hi:
                continue
            g = lambda x, m=m: _real_mode_phase(model, x, k, pol, cfg.L) / (2.0 * math.pi) - m
            if g(w[i]) == 0:
                positions.append((w[i], PoleKind.FABRY_PEROT))
            elif g(w[i]) * g(w[i + 1]) < 0:
                positions.append((optimize.brentq(g, w[i], w[i + 1], xtol=1e-15 * top, rtol=1e-15), PoleKind.FABRY_PEROT))

    # evanescent sector: real rho crossing 1 (surface plasmons)
    if pol is not TE and ck > 0:
        t = np.linspace(0.0, 1.0, grid)[1:-1]
        w = ck * np.sin(0.5 * math.pi * t)
        excess = np.asarray(open_loop(cfg, k, pol, w)).real - 1.0
        for i in np.nonzero(np.sign(excess[:-1]) * np.sign(excess[1:]) < 0)[0]:
            h = lambda x: float(np.real(open_loop(cfg, k, pol, x))) - 1.0
            positions.append((optimize.brentq(h, w[i], w[i + 1], xtol=1e-15 * ck, rtol=1e-15), PoleKind.PLASMONIC))

    # every root must be a genuine resonance rho = 1
    positions = sorted(p for p in positions if abs(1.0 - complex(open_loop(cfg, k, pol, p[0]))) < 1e-7)
    records = []
    if pol is TE:
        r0 = min(indent, 0.25 * cfg.thermal_frequency, 0.5 * ck) if ck > 0 else min(indent, 0.25 * cfg.thermal_frequency)
        fn = lambda z: spectral_density(cfg, k, pol, z, branch="physical")
        records.append(PoleRecord(0j, 1, _residue_halving(fn, 0j, r0), PoleKind.ORIGIN, radius=r0))
    all_w = [p for p, _ in positions]
    for j, (wm, kind) in enumerate(positions):
        gaps = [abs(wm - o) for o in all_w if o != wm] + [abs(wm - ck), abs(top - wm), wm]
        r = min(indent, 0.25 * min(gaps))
        fn = lambda z: spectral_density(cfg, k, pol, z, branch="upper")
        records.append(PoleRecord(complex(wm), 1, _residue_halving(fn, complex(wm), r), kind, radius=r))
    return records


def _residue_halving(fn, z0, r):
    """Residue on a circle, checked against the circle of half the radius."""
    # 1 - rho is formed with cancellation of order the radius, so ask for less than 1e-11;
    # next to the band edge K_z^2 itself cancels and only ~1e-7 is reachable
    for tol in (1e-9, 1e-7, 1e-5):
        try:
            res = residue_at(fn, z0, r, tol=tol)
            res_half = residue_at(fn, z0, 0.5 * r, tol=tol)
            break
        except QuadratureError:
            if tol == 1e-5:
                raise
    if abs(res - res_half) > 1e-6 * max(abs(res), 1e-300):
        return res_half
    return res


def track_resonances(cfg, k, pol, gammas, window=None):
    """Follow each real resonance of the lossless cavity into the lower half-plane.

    Starting from the plasma positions, the damping is raised through the
    ascending values of ``gammas`` and each pole of ``f`` is refined by
    Newton iteration on ``1 - rho`` (continued across the light cone, i.e.
    with the ``upper`` wavevector branch).  Returns ``{gamma: [PoleRecord]}``
    in the order of the resonances from ``locate_real_modes``.

    Raises
    ------
    WindowViolationError
        If a pole leaves ``window = (re_min, re_max)`` (rad/s) on the way.
    """
    from ..cavity import open_loop
    from ..errors import WindowViolationError
    from ..quantities import C

    gammas = sorted(float(g) for g in gammas)
    if not gammas or gammas[0] <= 0:
        raise InvalidConfigurationError("damping values must be positive")
    plasma = cfg.with_gamma(0.0) if cfg.model.kind.value != "plasma" else cfg
    top = math.sqrt(plasma.model.omega_p**2 + (C * k) ** 2)
    lo_w, hi_w = window if window is not None else (0.0, 1.5 * top)
    start = [r for r in locate_real_modes(plasma, k, pol) if r.kind is not PoleKind.ORIGIN]
    current = [complex(r.position) for r in start]
    out = {}

    def solve(g, z0):
        lossy = plasma.with_gamma(g)
        fn = lambda z: 1.0 - open_loop(lossy, k, pol, z, branch="upper")
        return _newton(fn, z0, 1, max(abs(z0), 1.0) * 1e-3)

    def accept(z, z0):
        return z.imag < 0 and abs(z - z0) < 0.05 * abs(z0) and lo_w < z.real < hi_w

    g_prev = 0.0
    for g in gammas:
        recs = []
        for i, z0 in enumerate(current):
            # continuation in gamma with step halving on suspicious Newton jumps
            g_at, z_at, target = g_prev, z0, g
            halvings = 0
            while g_at < g:
                z = solve(target, z_at)
                if accept(z, z_at):
                    g_at, z_at, target = target, z, g
                    continue
                halvings += 1
                if halvings > 30:
                    raise WindowViolationError(f"resonance near {z_at:.6e} lost while raising gamma to {g:.3e}")
                target = g_at + 0.5 * (target - g_at) if g_at > 0 else 0.5 * target
            current[i] = z_at
            recs.append(PoleRecord(z_at, 1, None, start[i].kind))
        out[g] = recs
        g_prev = g
    return out
