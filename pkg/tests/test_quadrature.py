import math

import numpy as np
import pytest

from lumpcyl import ConvergenceError, QuadratureConfig
from lumpcyl.quadrature import (fixed_panel_integrate_cylinder, gauss_panels,
                                integrate_cylinder, periodic_y_grid,
                                seeded_edges)


def test_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(x_cutoff=-1.0)
    with pytest.raises(ValueError):
        QuadratureConfig(rel_tol=0.0)
    with pytest.raises(ValueError):
        QuadratureConfig(y_points=2)


def test_config_replace():
    cfg = QuadratureConfig().replace(rel_tol=1e-9)
    assert cfg.rel_tol == 1e-9
    assert cfg.x_cutoff == QuadratureConfig().x_cutoff


def test_gauss_panels_smooth():
    val, err = gauss_panels(np.sin, 0.0, math.pi, panels=4, rel_tol=1e-12)
    assert val == pytest.approx(2.0, rel=1e-13)
    assert err < 1e-10


def test_gauss_panels_vector_valued():
    def f(x):
        return np.stack([x, x * x], axis=-1)

    val, _ = gauss_panels(f, 0.0, 1.0, panels=2, rel_tol=1e-12)
    assert val[0] == pytest.approx(0.5, rel=1e-13)
    assert val[1] == pytest.approx(1.0 / 3.0, rel=1e-13)


def test_gauss_panels_narrow_peak_needs_seeds():
    # Lorentzian of half-width 1e-6 hiding between uniform panel edges
    w = 1e-6
    c = 0.3141

    def f(x):
        return w / ((x - c) ** 2 + w * w)

    exact = math.atan((1 - c) / w) + math.atan((1 + c) / w)
    edges = seeded_edges(-1.0, 1.0, 8, [(c, w)])
    val, _ = gauss_panels(f, -1.0, 1.0, edges=edges, rel_tol=1e-9,
                          max_refinements=40)
    assert val == pytest.approx(exact, rel=1e-8)


def test_gauss_panels_budget_error():
    def f(x):
        return np.sqrt(np.abs(x))

    with pytest.raises(ConvergenceError):
        gauss_panels(f, -1.0, 1.0, panels=2, rel_tol=1e-14,
                     max_refinements=1)


def test_gauss_panels_deterministic():
    def f(x):
        return np.exp(-x * x) * np.cos(3 * x)

    a = gauss_panels(f, -5.0, 5.0, panels=8, rel_tol=1e-10)[0]
    b = gauss_panels(f, -5.0, 5.0, panels=8, rel_tol=1e-10)[0]
    assert a == b


def test_periodic_grid():
    y = periodic_y_grid(8)
    assert len(y) == 8
    assert y[0] == -math.pi
    assert y[-1] < math.pi


def test_cylinder_smooth_vs_exact():
    # int sech^2(x) dx dy = 2 * 2pi
    def fn(x, y):
        return (1.0 / np.cosh(x)) ** 2 * (1.0 + 0.3 * np.cos(y))

    cfg = QuadratureConfig(x_cutoff=20.0)
    val = integrate_cylinder(fn, cfg)
    assert val == pytest.approx(4.0 * math.pi, rel=1e-12)


def test_cylinder_peaked_matches_smooth():
    def fn(x, y):
        return np.exp(-2.0 * np.abs(x)) * (1.0 + np.sin(y) ** 2)

    cfg = QuadratureConfig()
    a = integrate_cylinder(fn, cfg)
    b = integrate_cylinder(fn, cfg, peaked=True)
    assert a == pytest.approx(b, rel=1e-8)


def test_fixed_panels_match_adaptive():
    def fn(x, y):
        return np.exp(-x * x) * np.cos(y) ** 2

    cfg = QuadratureConfig()
    a = integrate_cylinder(fn, cfg)
    b = fixed_panel_integrate_cylinder(fn, cfg)
    assert a == pytest.approx(b, rel=1e-10)
