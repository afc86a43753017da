import io
import math

import numpy as np
import pytest

from casimir_modes.errors import InvalidConfigurationError, MissingSingularityError
from casimir_modes.io import read_csv
from casimir_modes.materials import TE, TM, DielectricModel
from casimir_modes.pressure import (matsubara_contribution_corrected, matsubara_contribution_drude,
                                    te_zero_gap)
from casimir_modes.spectral import (PROFILE_COLUMNS, Nature, SingularityMarker, profile_rows, pv_integral,
                                    real_axis_pressure_drude, real_axis_pressure_plasma, sokhotsky_corrections,
                                    spectral_density_profile, write_profile_csv)
from casimir_modes.quantities import K_B
from conftest import GOLD_GAMMA, GOLD_WP, K_GRID, L_REF

POLE = Nature.ODD_POLE


class TestPrincipalValue:
    def test_odd_integrand_vanishes(self):
        v, _ = pv_integral(lambda x: 1.0 / x, (-1.0, 1.0), [SingularityMarker(0.0, POLE)])
        assert abs(v) < 1e-14

    def test_log_closed_form(self):
        v, _ = pv_integral(lambda x: 1.0 / (x - 1.0), (0.0, 3.0), [SingularityMarker(1.0, POLE)], tol=1e-12)
        assert v == pytest.approx(math.log(2.0), rel=1e-10)

    def test_rational_closed_form(self):
        # PV int_0^2 x^2 / (x - 1/2) dx = 2 + 1 + (1/4) ln 3
        v, _ = pv_integral(lambda x: x * x / (x - 0.5), (0.0, 2.0), [SingularityMarker(0.5, POLE)])
        assert v == pytest.approx(3.0 + 0.25 * math.log(3.0), rel=1e-12)

    def test_two_poles(self):
        fn = lambda x: 1.0 / ((x - 1.0) * (x - 2.0))
        v, _ = pv_integral(fn, (0.0, 4.0), [SingularityMarker(1.0, POLE), SingularityMarker(2.0, POLE)])
        # partial fractions: ln|x-2| - ln|x-1| from 0 to 4
        assert v == pytest.approx(math.log(2.0 / 3.0) - math.log(2.0), rel=1e-11)

    def test_branch_point(self):
        v, _ = pv_integral(lambda x: 1.0 / np.sqrt(np.abs(x - 1.0)), (0.0, 2.0),
                           [SingularityMarker(1.0, Nature.BRANCH_POINT)])
        assert v == pytest.approx(4.0, rel=1e-12)

    def test_missing_singularity_reported(self):
        with pytest.raises(MissingSingularityError) as info:
            pv_integral(lambda x: 1.0 / (x - 1.0), (0.0, 3.0))
        assert info.value.location is not None
        assert 0.0 < info.value.location < 3.0

    def test_pole_on_boundary_rejected(self):
        with pytest.raises(InvalidConfigurationError):
            pv_integral(lambda x: 1.0 / x, (0.0, 1.0), [SingularityMarker(0.0, POLE)])


@pytest.mark.parametrize("pol", [TE, TM])
@pytest.mark.parametrize("k", [K_GRID[0], K_GRID[2], K_GRID[4]])
def test_drude_real_axis_equals_matsubara(drude_cfg, k, pol):
    a = real_axis_pressure_drude(drude_cfg, k, pol)
    b = matsubara_contribution_drude(drude_cfg, k, pol)
    assert a == pytest.approx(b, rel=1e-6)


def test_drude_te_equals_tm_at_normal_incidence(drude_cfg):
    a = real_axis_pressure_drude(drude_cfg, 0.0, TE)
    b = real_axis_pressure_drude(drude_cfg, 0.0, TM)
    assert a == pytest.approx(b, rel=1e-8)


def test_transparent_mirrors_give_no_pressure(drude_cfg):
    k = 1.0 / L_REF
    cfgs = [drude_cfg.with_model(DielectricModel.drude(s * GOLD_WP, GOLD_GAMMA)) for s in (1.0, 1e-1, 1e-2, 1e-3)]
    te = [abs(real_axis_pressure_drude(c, k, TE)) for c in cfgs]
    assert all(b < 0.1 * a for a, b in zip(te, te[1:]))
    # a Drude mirror stays a perfect static TM reflector for any omega_p > 0, so
    # only the finite-frequency part of the TM pressure disappears
    rho = math.exp(-2.0 * k * L_REF)
    static = -K_B * drude_cfg.T * k * rho / (1.0 - rho)
    assert real_axis_pressure_drude(cfgs[-1], k, TM) == pytest.approx(static, rel=1e-3)


@pytest.mark.parametrize("pol", [TE, TM])
@pytest.mark.parametrize("k", [K_GRID[1], K_GRID[3]])
def test_plasma_sokhotsky_equals_corrected_sum(plasma_cfg, k, pol):
    res = real_axis_pressure_plasma(plasma_cfg, k, pol)
    assert res.total == pytest.approx(matsubara_contribution_corrected(plasma_cfg, k, pol), rel=1e-4)
    assert res.residue_sum != 0


def test_origin_pole_carries_zero_frequency_gap(plasma_cfg):
    from casimir_modes.complexplane import locate_real_modes

    k = 1.0 / L_REF
    origin = locate_real_modes(plasma_cfg, k, TE)[:1]
    assert -sokhotsky_corrections(plasma_cfg, k, TE, origin) == pytest.approx(te_zero_gap(plasma_cfg, k), rel=1e-9)


def test_plasma_route_needs_plasma(drude_cfg):
    with pytest.raises(InvalidConfigurationError):
        real_axis_pressure_plasma(drude_cfg, 1e6, TE)
    with pytest.raises(InvalidConfigurationError):
        real_axis_pressure_drude(drude_cfg.with_model(DielectricModel.plasma(GOLD_WP)), 1e6, TE)


class TestProfiles:
    def test_rejects_static_point(self, drude_cfg):
        with pytest.raises(InvalidConfigurationError):
            spectral_density_profile(drude_cfg, 1e6, TE, [0.0, 1e12])

    def test_im_part_odd(self, drude_cfg, k_half):
        w = np.geomspace(1e-3, 20, 25) * GOLD_GAMMA
        a = spectral_density_profile(drude_cfg, k_half, TE, w)
        b = spectral_density_profile(drude_cfg, k_half, TE, -w)
        for p, q in zip(a, b):
            assert q.im_p == pytest.approx(-p.im_p, rel=1e-12)
            assert q.re_p == pytest.approx(p.re_p, rel=1e-12)

    def test_scaling_collapse(self, drude_cfg, k_half):
        # the collapse holds on the narrow low-frequency feature, omega below ~ gamma / 2
        x = np.geomspace(1e-3, 0.3, 40)
        ref = None
        for j in range(3):
            g = GOLD_GAMMA / 2**j
            c = drude_cfg.with_gamma(g)
            prof = np.array([pt.re_p for pt in spectral_density_profile(c, k_half, TE, x * g)]) * g
            if ref is None:
                ref = prof
            else:
                assert np.allclose(prof, ref, rtol=0.02)

    def test_csv_round_trip(self, drude_cfg, k_half):
        prof = spectral_density_profile(drude_cfg, k_half, TM, np.linspace(0.1, 3, 7) * GOLD_GAMMA)
        buf = io.StringIO(newline="")
        write_profile_csv(buf, profile_rows(drude_cfg, k_half, TM, prof))
        back = read_csv(io.StringIO(buf.getvalue(), newline=""), {c: float for c in PROFILE_COLUMNS[:5]})
        assert [r["pol"] for r in back] == ["tm"] * 7
        assert back[3]["re_p_dimensionless"] == prof[3].re_p
        assert back[3]["omega_over_gamma"] == pytest.approx(prof[3].omega / GOLD_GAMMA, rel=1e-15)
