import io
import math

import numpy as np
import pytest

from casimir_modes.complexplane.foucault import (TRAJECTORY_COLUMNS, axis_census, count, default_contours,
                                                 foucault_interval, gamma_tilde, gamma_tilde_asymptote,
                                                 trajectory_rows, trajectory_vs_width, write_trajectory_csv,
                                                 xi_of_K)
from casimir_modes.errors import InvalidConfigurationError
from casimir_modes.io import read_csv
from casimir_modes.materials import TE, TM, DielectricModel
from casimir_modes.quantities import C
from conftest import GOLD_GAMMA, GOLD_WP, L_REF


def _cubic_root_numpy(model, k):
    g, ck2 = model.gamma, (C * k) ** 2
    roots = np.roots([1.0, -g, ck2 + model.omega_p**2, -ck2 * g])
    real = roots[np.abs(roots.imag) < 1e-6 * g].real
    return float(real[(real > 0) & (real < g)][0])


@pytest.mark.parametrize("kL", [0.05, 0.5, 2.0, 20.0])
def test_gamma_tilde_matches_polynomial_roots(drude_cfg, kL):
    k = kL / L_REF
    assert gamma_tilde(drude_cfg.model, k) == pytest.approx(_cubic_root_numpy(drude_cfg.model, k), rel=1e-9)


def test_gamma_tilde_limits(drude_cfg):
    m = drude_cfg.model
    assert gamma_tilde(m, 0.0) == 0.0
    assert gamma_tilde(m, 1e3 * GOLD_WP / C) == pytest.approx(GOLD_GAMMA, rel=1e-5)
    # c k = omega_p puts the root near gamma / 2 when gamma << omega_p
    assert gamma_tilde(m, GOLD_WP / C) == pytest.approx(0.5 * GOLD_GAMMA, rel=1e-3)


def test_gamma_tilde_asymptote(drude_cfg):
    for kL in (0.1, 1.0, 10.0):
        k = kL / L_REF
        a, b = gamma_tilde(drude_cfg.model, k), gamma_tilde_asymptote(drude_cfg.model, k)
        assert a == pytest.approx(b, rel=5 * (GOLD_GAMMA / GOLD_WP) ** 2)


def test_interval_orientation(drude_cfg, k_half):
    iv = foucault_interval(drude_cfg.model, k_half)
    assert iv.upper == -GOLD_GAMMA
    assert iv.upper < iv.lower < 0
    assert iv.gamma_tilde == gamma_tilde(drude_cfg.model, k_half)


def test_gamma_zero_rejected():
    with pytest.raises(InvalidConfigurationError):
        gamma_tilde(DielectricModel.plasma(GOLD_WP), 1e6)


def test_contours_disjoint_and_nested(drude_cfg, k_half):
    fam = default_contours(drude_cfg, k_half)
    gt = gamma_tilde(drude_cfg.model, k_half)
    c2_top = max(z.imag for z in fam.c2.sample())
    assert c2_top == pytest.approx(-0.5 * gt)
    assert min(z.imag for z in fam.c3.sample()) == pytest.approx(min(z.imag for z in fam.c2.sample()))
    assert fam["C1"] is fam.c1


def test_count_requires_drude(plasma_cfg, k_half):
    with pytest.raises(InvalidConfigurationError):
        count(plasma_cfg, k_half, TE, "c1")


def test_xi_of_K_solves_dispersion(drude_cfg, k_half):
    m = drude_cfg.model
    K = np.geomspace(1e3, 1e10, 40)
    xi = xi_of_K(m, k_half, K)
    lhs = ((C * K) ** 2 + (C * k_half) ** 2 + xi**2) * (m.gamma - xi)
    assert np.allclose(lhs, m.omega_p**2 * xi, rtol=1e-9)
    assert np.all(np.diff(xi) > 0)


class TestCensus:
    @pytest.mark.parametrize("d", [1e-9, 1e-8, 1e-7, 1e-6])
    def test_zeros_minus_poles_matches_winding(self, drude_cfg, k_half, d):
        c = drude_cfg.with_width(d)
        census = axis_census(c, k_half)
        assert census.complete
        assert census.zeros_minus_poles == -2
        assert count(c, k_half, TE, "c2") == -2

    def test_thin_slab_has_two_dots_only(self, drude_cfg, k_half):
        census = axis_census(drude_cfg.with_width(1e-9), k_half)
        assert len(census.dots) == 2 and census.groups == []
        gt = gamma_tilde(drude_cfg.model, k_half)
        for p in census.dots:
            assert -GOLD_GAMMA < p.record.position.imag < -gt

    def test_groups_grow_with_width(self, drude_cfg, k_half):
        counts = [len(axis_census(drude_cfg.with_width(d), k_half).groups) for d in (1e-9, 1e-8, 1e-7)]
        assert counts[0] == 0 and counts[0] < counts[1] < counts[2]

    def test_group_zero_is_double(self, drude_cfg, k_half):
        census = axis_census(drude_cfg.with_width(1e-7), k_half)
        assert all(z.record.order == -2 for z in census.zeros)
        assert all(p.record.order == 1 for p in census.poles)


def test_trajectory_csv_round_trip(drude_cfg, k_half):
    out = trajectory_vs_width(drude_cfg, k_half, [1e-9, 3e-9, 1e-8], with_winding=False)
    rows = list(trajectory_rows(out))
    buf = io.StringIO(newline="")
    write_trajectory_csv(buf, rows)
    text = buf.getvalue()
    assert text.startswith(",".join(TRAJECTORY_COLUMNS) + "\r\n")
    back = read_csv(io.StringIO(text, newline=""))
    assert len(back) == len(rows)
    dots = [r for r in back if r["kind"] == "foucault" and r["track"].startswith("dot")]
    assert len({r["track"] for r in dots}) == 2
