import math

import numpy as np
import pytest

from casimir_modes.errors import QuadratureError
from casimir_modes.quadrature import (GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES, averaged_limit, integrate,
                                      panel_sums)


def test_rule_weights_sum_to_two():
    assert KRONROD_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
    assert GAUSS_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)


@pytest.mark.parametrize("deg", range(0, 23))
def test_kronrod_exact_to_degree_22(deg):
    exact = 0.0 if deg % 2 else 2.0 / (deg + 1)
    assert KRONROD_WEIGHTS @ NODES**deg == pytest.approx(exact, abs=1e-14)


def test_gauss_exact_to_degree_13_not_beyond():
    for deg in range(14):
        exact = 0.0 if deg % 2 else 2.0 / (deg + 1)
        assert GAUSS_WEIGHTS @ NODES**deg == pytest.approx(exact, abs=1e-14)
    assert abs(GAUSS_WEIGHTS @ NODES**14 - 2.0 / 15) > 1e-6


def test_integrate_smooth_and_peaked():
    v, e = integrate(np.exp, 0.0, 1.0)
    assert v == pytest.approx(math.e - 1, rel=1e-14)
    v, _ = integrate(lambda x: 1e-3 / (x * x + 1e-6), -1.0, 1.0, rtol=1e-12)
    assert v == pytest.approx(2 * math.atan(1e3), rel=1e-11)


def test_integrate_reversed_bounds():
    v, _ = integrate(np.sin, math.pi, 0.0)
    assert v == pytest.approx(-2.0, rel=1e-13)


def test_vector_valued_integrand():
    v, _ = integrate(lambda x: np.stack([np.sin(x), np.cos(x), x**2]), 0.0, math.pi)
    assert v == pytest.approx([2.0, 0.0, math.pi**3 / 3], abs=1e-12)


def test_breakpoints_help_kinks():
    v, _ = integrate(lambda x: np.abs(x - 0.3), 0.0, 1.0, breakpoints=[0.3])
    assert v == pytest.approx(0.5 * (0.09 + 0.49), rel=1e-14)


def test_non_convergence_names_worst_piece():
    with pytest.raises(QuadratureError) as info:
        integrate(lambda x: 1.0 / x, -1.0, 2.0, max_intervals=50)
    lo, hi = info.value.piece
    assert lo <= 0.0 <= hi


def test_panel_sums_and_averaged_limit_alternating_series():
    # int_0^inf sin(x)/x by pi-panels; the partial sums alternate around pi/2
    edges = np.arange(0, 400) * math.pi
    edges[0] = 1e-300
    vals, _ = panel_sums(lambda x: np.sin(x) / x, edges)
    lim, err = averaged_limit(np.cumsum(vals))
    assert lim == pytest.approx(math.pi / 2, rel=1e-10)


def test_averaged_limit_alternating_harmonic():
    s = np.cumsum([(-1) ** (n + 1) / n for n in range(1, 60)])
    lim, err = averaged_limit(s, levels=12)
    assert lim == pytest.approx(math.log(2), abs=1e-12)
