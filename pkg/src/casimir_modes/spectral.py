"""Real-frequency route to the pressure: principal values and Sokhotsky terms.

Per-mode values are normalised like ``pressure.matsubara_contribution``:
the integral of ``Re p`` over the whole real axis with ``d omega / 2 pi``,
i.e. ``(1/pi) int_0^inf Re p d omega`` since ``Re p`` is even.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .cavity import CavityConfig, spectral_density
from .complexplane.poles import PoleKind, locate_real_modes
from .errors import InvalidConfigurationError, MissingSingularityError, QuadratureError
from .io import write_csv
from .materials import TE, TM, Kind, Polarization, slab_reflection
from .quadrature import averaged_limit, integrate, panel_sums
from .quantities import C, HBAR, angular_to_ev

# |r|^2 below which the cavity is transparent enough to stop integrating
_TRANSPARENCY = 1e-10


class Nature(str, enum.Enum):
    ODD_POLE = "odd_pole"
    DELTA_PEAK = "delta_peak"
    BRANCH_POINT = "branch_point"


class SingularityMarker(NamedTuple):
    position: float
    nature: Nature


@dataclass(frozen=True)
class PVIntegralResult:
    principal_value: float
    residue_sum: float
    error_estimate: float = 0.0

    @property
    def total(self) -> float:
        return self.principal_value + self.residue_sum


def _fold(fn, c, sign=1.0):
    def g(t):
        # offsets representable on both sides, so c + t and c - t are exact mirror images
        t = (c + t) - c
        return fn(c + t) + sign * fn(c - t)
    return g


def pv_integral(fn, domain, singularities: Sequence[SingularityMarker] = (), tol=1e-10, atol=0.0, breakpoints=()):
    """Principal-value integral of the real vectorized ``fn`` over ``domain = (a, b)``.

    Around each odd pole (or delta-peak position) ``c`` the window
    ``[c - h, c + h]`` is folded onto ``int_0^h fn(c + t) + fn(c - t) dt``,
    which cancels the ``1/(omega - c)`` part exactly.  Next to a branch
    point ``c`` the substitution ``omega = c +- t^2`` absorbs the square-root
    behaviour.  Everything else goes to adaptive Gauss-Kronrod quadrature.

    Raises
    ------
    MissingSingularityError
        If some piece does not converge, which for a correct marker list
        means an undeclared singularity; ``location`` is its estimate.
    """
    a, b = map(float, domain)
    if not (np.isfinite(a) and np.isfinite(b)) or b <= a:
        raise InvalidConfigurationError("pv_integral needs a finite domain with a < b")
    marks = sorted((float(m.position), Nature(m.nature)) for m in singularities if a <= m.position <= b)
    for pos, nat in marks:
        if nat is not Nature.BRANCH_POINT and pos in (a, b):
            raise InvalidConfigurationError("a principal value needs the pole strictly inside the domain")
    cuts = sorted({a, b, *(p for p, _ in marks)})
    # half-windows: half the distance to the nearest neighbouring cut
    window = {}
    for p, _ in marks:
        others = [abs(p - q) for q in cuts if q != p]
        window[p] = 0.5 * min(others) if others else 0.5 * (b - a)
    pieces = []
    edges = [a]
    for p, _ in marks:
        lo, hi = max(a, p - window[p]), min(b, p + window[p])
        edges += [lo, hi]
    edges.append(b)
    covered = [(max(a, p - window[p]), min(b, p + window[p]), p, nat) for p, nat in marks]
    regular = []
    start = a
    for lo, hi, _, _ in covered:
        if lo > start:
            regular.append((start, lo))
        start = max(start, hi)
    if b > start:
        regular.append((start, b))

    total = 0.0
    err = 0.0
    bp = [float(x) for x in breakpoints]
    # pieces hugging a singularity can be tiny; hold them to the size of the whole integral
    coarse = np.unique(np.concatenate([[x for r in regular for x in r], [x for x in bp if a < x < b]]))
    coarse = [(lo, hi) for lo, hi in zip(coarse[:-1], coarse[1:]) if any(r0 <= lo and hi <= r1 for r0, r1 in regular)]
    scale = 0.0
    if coarse:
        with np.errstate(all="ignore"):
            scale = float(np.nansum([panel_sums(lambda x: np.abs(fn(x)), c)[0] for c in coarse]))
    # shared out so that the pieces together stay within tol * int |fn|
    atol = max(atol, tol * scale / (len(regular) + 2 * len(covered)))

    def run(f, lo, hi, where, pts=(), floor=0.0):
        try:
            return integrate(f, lo, hi, rtol=tol, atol=max(atol, floor), breakpoints=pts, label=where)
        except QuadratureError as exc:
            piece = exc.piece
            loc = 0.5 * (piece[0] + piece[1]) if isinstance(piece, tuple) and len(piece) == 2 else None
            raise MissingSingularityError(f"principal-value integrand diverges near {loc}", location=loc,
                                          piece=piece, estimate=exc.estimate, error=exc.error) from exc

    for lo, hi in regular:
        v, e = run(fn, lo, hi, f"[{lo:.6g}, {hi:.6g}]", [x for x in bp if lo < x < hi])
        total += v
        err += e
    for lo, hi, p, nat in covered:
        if nat is Nature.BRANCH_POINT:
            # omega = p + t^2 on the right, p - t^2 on the left
            if hi > p:
                f_r = lambda t, p=p: fn(p + t * t) * 2.0 * t
                v, e = run(f_r, 0.0, math.sqrt(hi - p), f"branch point {p:.6g} (right)",
                           [math.sqrt(x - p) for x in bp if p < x < hi])
                total += v
                err += e
            if lo < p:
                f_l = lambda t, p=p: fn(p - t * t) * 2.0 * t
                v, e = run(f_l, 0.0, math.sqrt(p - lo), f"branch point {p:.6g} (left)",
                           [math.sqrt(p - x) for x in bp if lo < x < p])
                total += v
                err += e
        else:
            # below t0 the folded sum is dominated by rounding; there it is modelled as
            # A + B / t^2, B being what is left of a pole a few ulps off the marker,
            # whose principal value over [0, t0] is A t0 - B / t0
            h = hi - p
            t0 = 1e-4 * h
            g = _fold(fn, p)
            g1, g2 = g(np.array([t0, 2.0 * t0]))
            B = (4.0 / 3.0) * t0 * t0 * (g1 - g2)
            A = g2 - B / (4.0 * t0 * t0)
            # a fold that cancels completely has no relative scale of its own
            edge = np.abs(fn(np.array([p - h, p + h]))).sum()
            v, e = run(g, t0, h, f"principal value at {p:.6g}", [abs(x - p) for x in bp if lo < x < hi and x != p],
                       floor=tol * h * float(edge))
            total += v + float(A * t0 - B / t0)
            err += e
    return float(total), float(err)


def _re_p(cfg, k, pol):
    def fn(w):
        return np.real(spectral_density(cfg, k, pol, w))
    return fn


def _half_period_edges(cfg, k, lo, hi):
    """Frequencies where the round-trip phase ``2 k_z L`` is a multiple of ``pi``."""
    ck = C * k
    j0 = math.ceil(2.0 * cfg.L * math.sqrt(max(lo * lo - ck * ck, 0.0)) / (math.pi * C))
    j1 = math.floor(2.0 * cfg.L * math.sqrt(max(hi * hi - ck * ck, 0.0)) / (math.pi * C))
    j = np.arange(max(j0, 1), j1 + 1)
    return C * np.sqrt(k * k + (j * math.pi / (2.0 * cfg.L)) ** 2)


def _transparency_cutoff(cfg, k, pol, start):
    w = max(start, 1.0)
    while abs(complex(slab_reflection(cfg.model, w, k, pol, cfg.d))) ** 2 > _TRANSPARENCY:
        w *= 1.5
    return w


def _oscillatory_tail(cfg, k, pol, start, fn, atol=0.0):
    """``int_start^inf fn`` by half-period panels and averaged partial sums."""
    stop = _transparency_cutoff(cfg, k, pol, start)
    edges = _half_period_edges(cfg, k, start, stop)
    edges = np.concatenate([[start], edges[edges > start * (1 + 1e-12)]])
    if edges.size < 3:
        v, e = integrate(fn, start, 2.0 * stop, rtol=1e-10, atol=atol, label="transparent tail")
        return float(v), e
    vals, errs = panel_sums(fn, edges)
    limit, acc = averaged_limit(np.cumsum(vals))
    return float(limit), float(errs.sum() + acc)


def real_axis_pressure_drude(cfg: CavityConfig, k, pol, tol=1e-8, full_output=False, atol=0.0):
    """Per-mode pressure ``(1/pi) int_0^inf Re p d omega`` for a lossy mirror.

    The narrow low-frequency feature of width ``~gamma`` gets its own
    breakpoints, the light cone ``c k`` is a branch point, the propagative
    sector is cut at half periods of ``2 k_z L`` and the high-frequency
    remainder is summed panel by panel up to transparency.
    """
    if cfg.model.kind is not Kind.DRUDE:
        raise InvalidConfigurationError("real_axis_pressure_drude requires gamma > 0")
    k = float(k)
    if k < 0:
        raise InvalidConfigurationError("k must be non-negative")
    pol = Polarization.parse(pol)
    g, wp, ck = cfg.model.gamma, cfg.model.omega_p, C * k
    fn = _re_p(cfg, k, pol)
    head = max(4.0 * wp, 2.0 * ck)
    periods = _half_period_edges(cfg, k, ck, head)
    head = float(periods[-1]) if periods.size and periods[-1] > ck else head
    bps = [0.1 * g, g, 3.0 * g, 10.0 * g, wp, math.sqrt(wp * wp + ck * ck), *periods[:-1]]
    # at normal incidence 1 - rho vanishes like sqrt(omega), so the origin is a branch point
    markers = [SingularityMarker(ck, Nature.BRANCH_POINT)]
    main, e1 = pv_integral(fn, (0.0, head), markers, tol=tol, atol=math.pi * atol,
                           breakpoints=[x for x in bps if 0 < x < head])
    tail, e2 = _oscillatory_tail(cfg, k, pol, head, fn, atol=math.pi * atol)
    value = (main + tail) / math.pi
    if full_output:
        return value, (e1 + e2) / math.pi
    return value


def real_mode_markers(cfg, k, pol):
    """Markers for the lossless real axis: light cone, window edge and resonances."""
    ck = C * k
    top = math.sqrt(cfg.model.omega_p**2 + ck * ck)
    marks = [SingularityMarker(top, Nature.BRANCH_POINT)]
    if ck > 0:
        marks.append(SingularityMarker(ck, Nature.BRANCH_POINT))
    for rec in locate_real_modes(cfg, k, pol):
        if rec.kind is not PoleKind.ORIGIN:
            marks.append(SingularityMarker(rec.position.real, Nature.DELTA_PEAK))
    return sorted(marks)


def sokhotsky_corrections(cfg: CavityConfig, k, pol, records=None) -> float:
    """Delta-peak content of ``(1/2 pi) int Re p d omega`` at the real resonances.

    Each pair ``+-omega_m`` contributes ``Im p_hat_m`` (the residue of the
    spectral density) and the TE origin pole contributes half of its
    residue's imaginary part.
    """
    if records is None:
        records = locate_real_modes(cfg, k, pol)
    total = 0.0
    for rec in records:
        if not rec.resolved or rec.residue is None:
            from .errors import CasimirError
            raise CasimirError(f"unresolved real resonance near {rec.position}")
        share = 0.5 if rec.kind is PoleKind.ORIGIN else 1.0
        total += share * rec.residue.imag
    return float(total)


def _plasma_re_p(cfg, k, pol, top):
    base = _re_p(cfg, k, pol)
    ck = C * k

    def fn(w):
        w = np.asarray(w, dtype=float)
        # on the propagative window |r| = 1, so Re f = -1/2 identically
        kz = np.sqrt(np.maximum(w * w / C**2 - k * k, 0.0))
        from .cavity import photon_weight
        inside = (w > ck) & (w < top)
        out = np.where(inside, -0.5 * HBAR * kz * np.real(photon_weight(cfg.T, np.where(inside, w, top * 2))), 0.0)
        above = w >= top
        if np.any(above):
            out = np.where(above, base(np.where(above, w, 2 * top)), out)
        # evanescent sector: p is purely imaginary away from the plasmon poles
        return out

    return fn


def real_axis_pressure_plasma(cfg: CavityConfig, k, pol, tol=1e-9, atol=0.0) -> PVIntegralResult:
    """Per-mode pressure of the lossless mirror: principal value plus residues."""
    if cfg.model.kind is not Kind.PLASMA:
        raise InvalidConfigurationError("real_axis_pressure_plasma requires the plasma model")
    k = float(k)
    pol = Polarization.parse(pol)
    ck = C * k
    top = math.sqrt(cfg.model.omega_p**2 + ck * ck)
    records = locate_real_modes(cfg, k, pol)
    markers = [SingularityMarker(top, Nature.BRANCH_POINT)]
    if ck > 0:
        markers.append(SingularityMarker(ck, Nature.BRANCH_POINT))
    markers += [SingularityMarker(r.position.real, Nature.DELTA_PEAK) for r in records if r.kind is not PoleKind.ORIGIN]
    fn = _plasma_re_p(cfg, k, pol, top)
    head = max(4.0 * top, 2.0 * ck)
    periods = _half_period_edges(cfg, k, top, head)
    head = float(periods[-1]) if periods.size else head
    pv, e1 = pv_integral(fn, (ck if ck > 0 else 0.0, head), [m for m in markers if m.position > 0], tol=tol, atol=math.pi * atol,
                         breakpoints=[x for x in periods[:-1] if x < head])
    tail, e2 = _oscillatory_tail(cfg, k, pol, head, _re_p(cfg, k, pol), atol=math.pi * atol)
    residues = sokhotsky_corrections(cfg, k, pol, records)
    return PVIntegralResult((pv + tail) / math.pi, residues, (e1 + e2) / math.pi)


class ProfilePoint(NamedTuple):
    omega: float
    re_p: float
    im_p: float


def spectral_density_profile(cfg: CavityConfig, k, pol, omega_grid):
    """Dimensionless ``(L / hbar) p`` along real frequencies (``gamma > 0``)."""
    if cfg.model.kind is not Kind.DRUDE:
        raise InvalidConfigurationError("spectral profiles are sampled for gamma > 0 only")
    w = np.asarray(omega_grid, dtype=float)
    if np.any(w == 0):
        raise InvalidConfigurationError("omega = 0 is a pole of the photon weight; drop it from the grid")
    p = np.asarray(spectral_density(cfg, k, pol, w)) * (cfg.L / HBAR)
    return [ProfilePoint(float(a), float(b.real), float(b.imag)) for a, b in zip(w.ravel(), p.ravel())]


PROFILE_COLUMNS = ("omega_over_gamma", "re_p_dimensionless", "im_p_dimensionless", "gamma_ev", "k_rad_per_m", "pol")


def profile_rows(cfg: CavityConfig, k, pol, profile):
    g = cfg.model.gamma
    pol = Polarization.parse(pol)
    for pt in profile:
        yield (pt.omega / g, pt.re_p, pt.im_p, float(angular_to_ev(g)), float(k), pol.value)


def write_profile_csv(stream, rows):
    """RFC-4180 CSV with the header ``PROFILE_COLUMNS``."""
    write_csv(stream, PROFILE_COLUMNS, rows)
