"""Randomized identities of the mode functions, each on 1000 samples."""
import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from casimir_modes.cavity import (CavityConfig, energy_ratio, matsubara_residue, open_loop,
                                  spectral_density)
from casimir_modes.complexplane import locate_real_modes, residue_at
from casimir_modes.materials import TE, TM, DielectricModel
from casimir_modes.quantities import C
from casimir_modes.spectral import Nature, SingularityMarker, pv_integral
from conftest import GOLD_GAMMA, GOLD_WP, L_REF, T_REF

N = 1000
# examples actually drawn, per property
SAMPLE_COUNTS = Counter()
SAMPLES = settings(max_examples=N, deadline=None)

DRUDE = CavityConfig(L_REF, T_REF, DielectricModel.drude(GOLD_WP, GOLD_GAMMA))
PLASMA = CavityConfig(L_REF, T_REF, DielectricModel.plasma(GOLD_WP))
XI1 = DRUDE.thermal_frequency

pols = st.sampled_from([TE, TM])
models = st.sampled_from([DRUDE, PLASMA])
# k from 0.02/L to 20/L, log-uniform
k_values = st.floats(math.log(0.02), math.log(20.0)).map(lambda s: math.exp(s) / L_REF)
# frequencies from 1e-3 gamma to 3 omega_p, log-uniform
omegas = st.floats(math.log(1e-3 * GOLD_GAMMA), math.log(3 * GOLD_WP)).map(math.exp)


@st.composite
def upper_half_points(draw):
    """Complex frequencies clear of the Matsubara poles and of the real axis."""
    re = draw(st.floats(-3 * GOLD_WP, 3 * GOLD_WP))
    im = draw(st.floats(math.log(1e-2 * GOLD_GAMMA), math.log(GOLD_WP)).map(math.exp))
    z = complex(re, im)
    n = round(im / XI1)
    if abs(z - 1j * n * XI1) < 1e-3 * XI1:
        z += 0.01 * XI1
    return z


def _close(a, b, rel):
    return abs(a - b) <= rel * max(abs(a), abs(b))


@SAMPLES
@given(models, k_values, pols, upper_half_points())
def test_mirror_symmetry(cfg, k, pol, z):
    SAMPLE_COUNTS["test_mirror_symmetry"] += 1
    p = spectral_density(cfg, k, pol, z)
    q = spectral_density(cfg, k, pol, -z.conjugate())
    assert _close(q.conjugate(), p, 1e-10)


@SAMPLES
@given(k_values, pols, omegas)
def test_parity_on_real_axis(k, pol, w):
    SAMPLE_COUNTS["test_parity_on_real_axis"] += 1
    p = spectral_density(DRUDE, k, pol, w)
    q = spectral_density(DRUDE, k, pol, -w)
    scale = abs(p)
    assert abs(q.real - p.real) <= 1e-10 * scale
    assert abs(q.imag + p.imag) <= 1e-10 * scale


@SAMPLES
@given(models, k_values, pols, st.integers(1, 4), st.floats(0.04, 0.4), st.floats(0.04, 0.4))
def test_residue_independent_of_radius(cfg, k, pol, n, a, b):
    SAMPLE_COUNTS["test_residue_independent_of_radius"] += 1
    fn = lambda z: spectral_density(cfg, k, pol, z)
    z0 = 1j * n * XI1
    r1 = residue_at(fn, z0, a * XI1)
    r2 = residue_at(fn, z0, b * XI1)
    assert _close(r1, r2, 1e-8)


@SAMPLES
@given(models, k_values, pols, st.integers(1, 3), st.floats(0.05, 0.45))
def test_matsubara_residue_analytic(cfg, k, pol, n, a):
    SAMPLE_COUNTS["test_matsubara_residue_analytic"] += 1
    fn = lambda z: spectral_density(cfg, k, pol, z)
    numeric = residue_at(fn, 1j * n * XI1, a * XI1)
    assert _close(numeric, matsubara_residue(cfg, k, pol, n), 1e-8)


@SAMPLES
@given(models, k_values, pols, omegas)
def test_energy_ratio_formulas_agree(cfg, k, pol, w):
    SAMPLE_COUNTS["test_energy_ratio_formulas_agree"] += 1
    rho = open_loop(cfg, k, pol, w)
    if abs(1 - rho) < 1e-6:
        w *= 1.0 + 1e-4  # step off a lossless resonance
    rho = open_loop(cfg, k, pol, w)
    a = energy_ratio(cfg, k, pol, w, method="direct")
    b = energy_ratio(cfg, k, pol, w, method="closed_loop")
    # evanescent TM amplitudes may exceed one; passive propagation may not
    if abs(rho) <= 1:
        # lossless mirrors have |rho| = 1 to rounding, which 1 - |rho|^2 amplifies
        assert a >= -1e-15 / abs(1 - rho) ** 2
    # on the lossless window g vanishes while 1 + 2 Re f cancels terms of size 1/|1 - rho|^2
    assert abs(a - b) <= 1e-12 * max(1.0, abs(a), 1.0 / abs(1 - rho) ** 2)


def _im_p(cfg, k, pol):
    return lambda w: np.imag(spectral_density(cfg, k, pol, w))


def _odd_markers(cfg, k, pol, window):
    """Singular points of Im p on ``(-window, window)``, mirrored."""
    ck = C * k
    marks = [SingularityMarker(0.0, Nature.ODD_POLE)]
    branch = [ck]
    poles = []
    if cfg.model.gamma == 0:
        branch.append(math.sqrt(GOLD_WP**2 + ck * ck))
        poles = [r.position.real for r in locate_real_modes(cfg, k, pol)[(1 if pol is TE else 0):]]
    for x in branch:
        if x < window:
            marks += [SingularityMarker(x, Nature.BRANCH_POINT), SingularityMarker(-x, Nature.BRANCH_POINT)]
    for x in poles:
        if x < window:
            marks += [SingularityMarker(x, Nature.ODD_POLE), SingularityMarker(-x, Nature.ODD_POLE)]
    return marks


# plasma windows need the real-mode search, which costs ~10 ms; cache per (k, pol)
_MARKS = {}


@SAMPLES
@given(models, st.sampled_from([0.1, 0.3, 1.0, 2.0, 5.0]), pols, st.floats(0.2, 1.5))
def test_pv_of_im_p_vanishes(cfg, kL, pol, frac):
    SAMPLE_COUNTS["test_pv_of_im_p_vanishes"] += 1
    k = kL / L_REF
    window = frac * GOLD_WP
    key = (cfg.model.kind, kL, pol)
    if key not in _MARKS:
        _MARKS[key] = _odd_markers(cfg, k, pol, 2 * GOLD_WP)
    marks = [m for m in _MARKS[key] if abs(m.position) < window * (1 - 1e-9)]
    fn = _im_p(cfg, k, pol)
    v, err = pv_integral(fn, (-window, window), marks, tol=1e-9)
    half, _ = pv_integral(fn, (1e-6 * window, window), [m for m in marks if m.position > 1e-6 * window],
                          tol=1e-9)
    # a nonzero half-line integral makes the cancellation meaningful
    assert abs(v) <= 1e-7 * abs(half) + 1e-30
