"""Closed contours, contour quadrature and argument-principle counts."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence, Union

import numpy as np

from ..errors import IllConditionedContourError, QuadratureError
from ..quadrature import integrate


@dataclass(frozen=True)
class Line:
    start: complex
    end: complex

    def point(self, t):
        return self.start + (self.end - self.start) * t

    def tangent(self, t):
        return np.full(np.shape(t), self.end - self.start, dtype=complex)

    @property
    def scale(self) -> float:
        return abs(self.end - self.start)

    @property
    def first(self):
        return complex(self.start)

    @property
    def last(self):
        return complex(self.end)


@dataclass(frozen=True)
class Arc:
    """Arc of ``center + radius e^{i theta}`` for theta from ``theta0`` to ``theta1``."""

    center: complex
    radius: float
    theta0: float
    theta1: float

    def point(self, t):
        th = self.theta0 + (self.theta1 - self.theta0) * t
        return self.center + self.radius * np.exp(1j * th)

    def tangent(self, t):
        th = self.theta0 + (self.theta1 - self.theta0) * t
        return 1j * (self.theta1 - self.theta0) * self.radius * np.exp(1j * th)

    @property
    def scale(self) -> float:
        return self.radius * max(abs(self.theta1 - self.theta0), 1e-300)

    @property
    def first(self):
        return complex(self.point(0.0))

    @property
    def last(self):
        return complex(self.point(1.0))


Segment = Union[Line, Arc]


@dataclass(frozen=True)
class ContourPath:
    """A closed, counter-clockwise chain of lines and arcs."""

    segments: tuple
    name: str = ""
    orientation: str = field(default="ccw")

    def __post_init__(self):
        segs = tuple(self.segments)
        object.__setattr__(self, "segments", segs)
        if not segs:
            raise ValueError("a contour needs at least one segment")
        scale = max(abs(s.first) for s in segs) + max(s.scale for s in segs)
        tol = 1e-12 * scale
        for a, b in zip(segs, segs[1:] + segs[:1]):
            if abs(a.last - b.first) > tol:
                raise ValueError(f"contour {self.name!r} is not closed: gap {abs(a.last - b.first):.3e}")

    @property
    def scale(self) -> float:
        return sum(s.scale for s in self.segments)

    def sample(self, n_per_segment=64):
        t = np.linspace(0.0, 1.0, n_per_segment, endpoint=False)
        return np.concatenate([s.point(t) for s in self.segments])

    def distance_to(self, z0) -> float:
        pts = self.sample(2048)
        return float(np.min(np.abs(pts - z0)))

    def check_clearance(self, points, exclusion):
        """Raise ``ValueError`` if the path passes within ``exclusion`` of any point."""
        for p in np.atleast_1d(points):
            if self.distance_to(p) < exclusion:
                raise ValueError(f"contour {self.name!r} passes within {exclusion:.3e} of singular point {p}")


def circle(center, radius, name="") -> ContourPath:
    return ContourPath((Arc(complex(center), float(radius), 0.0, 2.0 * math.pi),), name=name)


def rectangle(x0, x1, y0, y1, name="") -> ContourPath:
    """Counter-clockwise rectangle ``[x0, x1] x [y0, y1]``."""
    a, b, c, d = complex(x0, y0), complex(x1, y0), complex(x1, y1), complex(x0, y1)
    return ContourPath((Line(a, b), Line(b, c), Line(c, d), Line(d, a)), name=name)


class ContourIntegral(NamedTuple):
    value: complex
    error: float


def contour_integral(fn, path: ContourPath, tol=1e-10, atol=0.0, full_output=False, max_intervals=4000):
    """``oint fn(z) dz`` along ``path`` by adaptive quadrature on each piece.

    ``fn`` must accept numpy arrays of complex points.
    """
    total = 0j
    err = 0.0
    for i, seg in enumerate(path.segments):
        def integrand(t, seg=seg):
            return np.asarray(fn(seg.point(t)), dtype=complex) * seg.tangent(t)

        try:
            v, e = integrate(integrand, 0.0, 1.0, rtol=tol, atol=atol, max_intervals=max_intervals,
                             label=f"{path.name or 'contour'} piece {i}")
        except QuadratureError as exc:
            raise QuadratureError(str(exc), piece=(i, seg), estimate=exc.estimate, error=exc.error) from exc
        total += v
        err += e
    if full_output:
        return ContourIntegral(total, err)
    return total


def log_derivative(fn, z, h):
    """``fn'(z) / fn(z)`` with a central difference of complex step ``h``."""
    f0 = np.asarray(fn(z), dtype=complex)
    fp = np.asarray(fn(z + h), dtype=complex)
    fm = np.asarray(fn(z - h), dtype=complex)
    return (fp - fm) / (2.0 * h * f0)


class Winding(NamedTuple):
    count: int
    raw: complex
    error: float


def winding_number(fn, path: ContourPath, tol=1e-6, step=1e-6, full_output=False):
    """Zeros minus poles of ``fn`` enclosed by ``path``.

    The logarithmic derivative is formed numerically, with the difference
    step set to ``step`` times the length scale of each piece, directed
    along the path.

    Raises
    ------
    IllConditionedContourError
        If the integral is not within ``10 * tol`` of an integer.
    """
    total = 0j
    err = 0.0
    for i, seg in enumerate(path.segments):
        def integrand(t, seg=seg):
            z = seg.point(t)
            dz = seg.tangent(t)
            h = step * seg.scale * dz / np.abs(dz)
            return log_derivative(fn, z, h) * dz

        try:
            v, e = integrate(integrand, 0.0, 1.0, rtol=tol, atol=0.1 * tol, max_intervals=4000,
                             label=f"{path.name or 'contour'} piece {i}")
        except QuadratureError as exc:
            raise QuadratureError(str(exc), piece=(i, seg), estimate=exc.estimate, error=exc.error) from exc
        total += v
        err += e
    raw = total / (2j * math.pi)
    n = int(round(raw.real))
    if abs(raw - n) >= 10 * tol and abs(raw - n) >= 1e-9:
        raise IllConditionedContourError(f"argument-principle integral {raw:.6g} is not close to an integer", raw=raw)
    if full_output:
        return Winding(n, raw, err / (2 * math.pi))
    return n


def residue_at(fn, z0, radius, tol=1e-11):
    """``(1 / 2 pi i) oint fn dz`` on the circle ``|z - z0| = radius``."""
    return contour_integral(fn, circle(z0, radius), tol=tol) / (2j * math.pi)
