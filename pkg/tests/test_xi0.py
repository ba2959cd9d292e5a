import math

import numpy as np
import pytest

from lumpcyl import (DomainError, QuadratureConfig, conformal_derivatives,
                     conformal_factor, conformal_factor_from_f,
                     conformal_factor_quadrature, effective_potential,
                     embedding_profile, scalar_curvature, total_curvature)
from lumpcyl.xi0 import _TAYLOR, _height_integrand

EIGHT_PI = 8 * math.pi


def test_value_at_one():
    # removable singularity: both closed-form branches are 0/0 there
    assert conformal_factor(1.0) == pytest.approx(2 * math.pi ** 2, rel=1e-14)


def test_domain():
    for fn in (conformal_factor, scalar_curvature, effective_potential):
        with pytest.raises(DomainError):
            fn(0.0)
        with pytest.raises(DomainError):
            fn(-1.0)


def test_quadrature_oracle():
    cfg = QuadratureConfig()
    for a in (0.25, 0.5, 0.9, 1.0, 1.1, 2.0, 4.0):
        closed = conformal_factor(a)
        quad = conformal_factor_quadrature(a, cfg)
        assert abs(closed - quad) <= 1e-6 * closed


def test_branch_continuity_against_series():
    # elliptic branches vs the eps = a^4 - 1 series inside its window
    for a in (1 - 1e-4, 1 + 1e-4):
        eps = a ** 4 - 1.0
        series = 4 * math.pi ** 2 * sum(c * eps ** m
                                        for m, c in enumerate(_TAYLOR))
        assert conformal_factor(a) == pytest.approx(series, rel=1e-9)


def test_smoothness_across_one():
    # five-point second derivative is continuous across a = 1
    h = 2e-4

    def second(a):
        vals = [conformal_factor(a + i * h) for i in (-2, -1, 0, 1, 2)]
        return (-vals[0] + 16 * vals[1] - 30 * vals[2] + 16 * vals[3]
                - vals[4]) / (12 * h * h)

    left, right = second(1 - 5 * h), second(1 + 5 * h)
    assert abs(left - right) / abs(left) < 1e-2
    mid = second(1.0)
    assert abs(mid - 0.5 * (left + right)) / abs(mid) < 1e-2


def test_small_a_asymptotics():
    a = 0.01
    approx = EIGHT_PI * (math.log(4 / a ** 2) - 1)
    assert conformal_factor(a) == pytest.approx(approx, rel=0.02)


def test_large_a_asymptotics():
    a = 100.0
    assert a * a * conformal_factor(a) == pytest.approx(EIGHT_PI, abs=1e-3)
    assert a * math.sqrt(conformal_factor(a)) == pytest.approx(
        math.sqrt(EIGHT_PI), abs=1e-3)


def test_monotone_decreasing():
    grid = np.geomspace(1e-3, 1e3, 200)
    vals = [conformal_factor(a) for a in grid]
    assert all(x > y for x, y in zip(vals, vals[1:]))


def test_third_route_through_f():
    for a in (0.3, 0.7, 1.0, 1.4, 3.0):
        assert conformal_factor_from_f(a) == pytest.approx(
            conformal_factor(a), rel=1e-6)


# --- curvature ---------------------------------------------------------------

def test_curvature_finite_difference_oracle():
    def logI(a):
        return math.log(conformal_factor(a))

    for a in (10.0, 0.7):
        # two nested five-point stencils amplify roundoff like eps/h^2,
        # so the step scales with a rather than sitting at sqrt precision
        h = 1e-3 * a

        def g(a0):
            d = (-logI(a0 + 2 * h) + 8 * logI(a0 + h) - 8 * logI(a0 - h)
                 + logI(a0 - 2 * h)) / (12 * h)
            return a0 * d

        dg = (-g(a + 2 * h) + 8 * g(a + h) - 8 * g(a - h)
              + g(a - 2 * h)) / (12 * h)
        fd = -dg / (2 * a * conformal_factor(a))
        assert scalar_curvature(a) == pytest.approx(fd, rel=1e-6)


def test_curvature_positive_decreasing_divergent():
    grid = np.geomspace(1e-3, 1e3, 120)
    vals = [scalar_curvature(a) for a in grid]
    assert all(v > 0 for v in vals)
    assert all(x > y for x, y in zip(vals, vals[1:]))
    assert scalar_curvature(1e-3) > scalar_curvature(1e-2) > \
        scalar_curvature(1e-1)
    assert scalar_curvature(1e3) < 1e-4


def test_total_curvature_gauss_bonnet():
    cfg = QuadratureConfig()
    val = total_curvature(cfg)
    assert val == pytest.approx(2 * math.pi, abs=1e-3)
    # integrand positivity on the quadrature window
    for a in np.geomspace(1e-3, 1e3, 40):
        assert scalar_curvature(a) * conformal_factor(a) * a > 0
    # widening the truncation barely moves the value
    wider = total_curvature(cfg, a_lo=5e-4, a_hi=2e3)
    assert abs(wider - val) < 1e-4


# --- effective potential ----------------------------------------------------

def test_effective_potential_values():
    assert effective_potential(1.0) == pytest.approx(1 / (4 * math.pi ** 2),
                                                     rel=1e-12)
    assert effective_potential(1e3) == pytest.approx(1 / (16 * math.pi),
                                                     abs=1e-4)


def test_effective_potential_monotone():
    grid = np.geomspace(0.1, 100.0, 80)
    vals = [effective_potential(a) for a in grid]
    assert all(x > y for x, y in zip(vals, vals[1:]))
    assert all(v > 1 / (16 * math.pi) for v in vals)


# --- embedding ---------------------------------------------------------------

def test_embedding_profile_shape():
    prof = embedding_profile(1e-3, 100.0, 400)
    assert prof.height[0] == 0.0
    assert np.all(np.diff(prof.height) > 0)
    assert np.all(prof.radius > 0)
    assert prof.radius[-1] == pytest.approx(math.sqrt(EIGHT_PI), abs=1e-2)
    assert prof.radius[0] < 0.2


def test_embedding_profile_domain():
    with pytest.raises(DomainError):
        embedding_profile(2.0, 1.0, 10)


def test_embedding_condition_slack():
    from lumpcyl.xi0 import log_derivative
    for a in np.geomspace(1e-3, 1e3, 60):
        assert a * log_derivative(a) + 4.0 >= -1e-10


def test_profile_meets_axis_steeply():
    # the tangent angle tends to pi/2 at the tip, but only like
    # arctan sqrt(log(1/a)/2): the slope grows monotonically without bound
    prof = embedding_profile(1e-6, 1.0, 600)
    slope = np.gradient(prof.radius, prof.height)
    assert slope[0] > slope[150] > slope[400]
    assert slope[0] > 3.5          # sqrt(L/2) at a = 1e-6
    # discrete slope matches the analytic tangent (1+g/2)/sqrt(-g-g^2/4)
    # with g = a (log I)'
    from lumpcyl.xi0 import log_derivative
    a = 1e-3
    g = a * log_derivative(a)
    expect = (1 + g / 2) / math.sqrt(-g - g * g / 4)
    prof3 = embedding_profile(a, 1.0, 300)
    slope3 = np.gradient(prof3.radius, prof3.height)
    assert slope3[0] == pytest.approx(expect, rel=0.02)


def test_parallels_are_not_geodesics():
    # the height integrand never vanishes on compact ranges
    vals = [_height_integrand(a) for a in np.geomspace(0.1, 10.0, 50)]
    assert min(vals) > 0.5
