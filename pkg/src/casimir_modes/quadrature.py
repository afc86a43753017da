"""Vectorized globally adaptive Gauss-Kronrod (7/15) quadrature.

scipy's ``quad`` evaluates its integrand one point at a time and only for
real values.  The integrands here are numpy-vectorized and often complex
(contour integrals), so intervals are refined in batches instead.
"""
from __future__ import annotations

import numpy as np

from .errors import QuadratureError

_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
# Gauss nodes are the odd-indexed Kronrod nodes
GAUSS_WEIGHTS[1::2] = np.concatenate([_WG[:-1], _WG[::-1]])


def _panel_rule(fn, a, b):
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = mid[:, None] + half[:, None] * NODES[None, :]
    y = np.asarray(fn(x))
    if y.shape[-2:] != x.shape:
        y = np.broadcast_to(y, y.shape[:-2] + x.shape) if y.ndim >= 2 else np.broadcast_to(y, x.shape)
    k15 = half * (y @ KRONROD_WEIGHTS)
    g7 = half * (y @ GAUSS_WEIGHTS)
    diff = np.abs(k15 - g7)
    err = diff.reshape(-1, diff.shape[-1]).sum(axis=0) if diff.ndim > 1 else diff
    if not np.all(np.isfinite(k15)):
        bad = ~np.all(np.isfinite(k15).reshape(-1, k15.shape[-1]), axis=0)
        raise QuadratureError("non-finite integrand value", piece=(float(a[bad][0]), float(b[bad][0])))
    return k15, err


def integrate(fn, a, b, *, rtol=1e-10, atol=0.0, breakpoints=(), max_intervals=20000, label=None):
    """Integrate the vectorized ``fn`` over ``[a, b]``.

    ``fn`` maps an array ``x`` to values of shape ``x.shape`` or, for
    vector-valued integrands, ``(m,) + x.shape``; the error is then the sum
    over components and the tolerance is relative to the summed magnitude.
    ``breakpoints`` are interior points where the integrand is not smooth.
    Returns ``(value, error_estimate)``.
    """
    if b < a:
        value, err = integrate(fn, b, a, rtol=rtol, atol=atol, breakpoints=breakpoints,
                               max_intervals=max_intervals, label=label)
        return -value, err
    edges = np.unique(np.concatenate([[a, b], [p for p in breakpoints if a < p < b]]))
    lo, hi = edges[:-1].astype(float), edges[1:].astype(float)
    vals, errs = _panel_rule(fn, lo, hi)
    while True:
        total = vals.sum(axis=-1)
        err_total = errs.sum()
        target = max(atol, rtol * float(np.sum(np.abs(total))))
        if err_total <= target:
            return total, float(err_total)
        if lo.size >= max_intervals:
            worst = int(np.argmax(errs))
            raise QuadratureError(
                f"quadrature{' on ' + label if label else ''} did not converge: error {err_total:.3e} > {target:.3e}",
                piece=(float(lo[worst]), float(hi[worst])), estimate=total, error=err_total)
        # split every panel whose error exceeds its fair share, at most half of them
        share = target / lo.size
        split = errs > share
        order = np.argsort(errs)[::-1]
        cap = max(1, lo.size // 2)
        if split.sum() > cap:
            split = np.zeros_like(split)
            split[order[:cap]] = True
        if not split.any():
            split[order[0]] = True
        mid = 0.5 * (lo[split] + hi[split])
        if np.any((mid <= lo[split]) | (mid >= hi[split])):
            worst = int(np.argmax(errs))
            raise QuadratureError("interval subdivision reached machine precision",
                                  piece=(float(lo[worst]), float(hi[worst])), estimate=total, error=err_total)
        new_lo = np.concatenate([lo[split], mid])
        new_hi = np.concatenate([mid, hi[split]])
        nv, ne = _panel_rule(fn, new_lo, new_hi)
        keep = ~split
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        vals = np.concatenate([vals[..., keep], nv], axis=-1)
        errs = np.concatenate([errs[keep], ne])


def panel_sums(fn, edges):
    """Fixed 15-point Kronrod integral over each consecutive pair of ``edges``.

    Returns ``(values, errors)`` per panel; no refinement.
    """
    edges = np.asarray(edges, dtype=float)
    return _panel_rule(fn, edges[:-1], edges[1:])


def averaged_limit(partial_sums, levels=8):
    """Limit of an oscillating sequence of partial sums by repeated averaging.

    Neighbouring partial sums of an alternating tail bracket the limit;
    averaging them repeatedly cancels the boundary oscillation.  Returns
    ``(limit, error_estimate)`` where the error is the change produced by
    the last averaging level.
    """
    s = np.asarray(partial_sums)
    levels = min(levels, s.size - 1)
    last = [s[-1]]
    for _ in range(levels):
        s = 0.5 * (s[1:] + s[:-1])
        last.append(s[-1])
    err = abs(last[-1] - last[-2]) if len(last) > 1 else 0.0
    return last[-1], float(err)
