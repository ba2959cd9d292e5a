"""Geodesic motion on the two totally geodesic two-lump surfaces, the
numerically quadratured metric factor of the antipodal family, and
energy-density snapshots along the named scattering geodesics.

On the equal-endpoint surface the metric I(a)(da^2 + a^2 dtheta^2) is in
closed form, so trajectories integrate an explicit ODE system with an
embedded Dormand-Prince 5(4) pair; conservation of the energy and of the
Clairaut momentum p_theta = a^2 I(a) theta' is monitored, not enforced.
On the antipodal surface only the straight symmetry lines are certified
geodesics, and they are handled through one-dimensional arc length of the
quadratured conformal factor gamma(alpha).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConvergenceError, DivergenceError, DomainError

from .lumps import (RationalLump, antipodal_two_lump, feature_peaks,
                    symmetric_two_lump)
from .quadrature import (DEFAULT_CONFIG, QuadratureConfig, integrate_cylinder,
                         periodic_y_grid)
from .xi0 import conformal_derivatives, conformal_factor

A_FLOOR = 1e-4


@dataclass(frozen=True)
class GeodesicState:
    """Position and velocity on a 2D chart, at affine parameter t."""

    q1: float
    q2: float
    v1: float
    v2: float
    t: float = 0.0


@dataclass(frozen=True)
class Trajectory:
    states: tuple
    collapsed: bool = False

    @property
    def final(self) -> GeodesicState:
        return self.states[-1]

    def columns(self):
        arr = np.array([[s.t, s.q1, s.q2, s.v1, s.v2] for s in self.states])
        return arr


def xi0_energy(state: GeodesicState) -> float:
    """Conserved energy (1/2) gamma(v, v) of the conformal polar metric."""
    I = conformal_factor(state.q1)
    return 0.5 * I * (state.v1 ** 2 + state.q1 ** 2 * state.v2 ** 2)


def clairaut_constant(state: GeodesicState) -> float:
    """Momentum a^2 I(a) theta-dot conjugate to the cyclic angle."""
    return state.q1 ** 2 * conformal_factor(state.q1) * state.v2


def _xi0_rhs(y: np.ndarray) -> np.ndarray:
    a, _, va, vt = y
    I, I1, _ = conformal_derivatives(a)
    dlog = I1 / I
    return np.array([
        va,
        vt,
        -0.5 * dlog * va * va + (a + 0.5 * a * a * dlog) * vt * vt,
        -(dlog + 2.0 / a) * va * vt,
    ])


# Dormand-Prince 5(4) tableau
_DP_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_DP_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_DP_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784,
                   11 / 84, 0.0])
_DP_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640,
                   -92097 / 339200, 187 / 2100, 1 / 40])


def _dp_step(rhs, y, h):
    k = [rhs(y)]
    for row in _DP_A[1:]:
        k.append(rhs(y + h * sum(c * ki for c, ki in zip(row, k))))
    k = np.array(k)
    y5 = y + h * (_DP_B5 @ k)
    err = h * ((_DP_B5 - _DP_B4) @ k)
    return y5, err


def xi0_geodesic(initial: GeodesicState, t_end: float, tol: float = 1e-10, *,
                 a_floor: float = A_FLOOR, max_steps: int = 200000) -> Trajectory:
    """Integrate the geodesic equations on the equal-endpoint surface.

    Terminates early with the collapse flag once a drops below a_floor
    (the metric steepens there and step sizes vanish; the cutoff turns
    that into a typed outcome rather than an underflow).
    """
    if not initial.q1 > 0:
        raise DomainError("initial radius must be positive")
    y = np.array([initial.q1, initial.q2, initial.v1, initial.v2])
    t = initial.t
    states = [replace(initial, t=t)]
    h = min(0.01, abs(t_end - t)) or 0.01
    collapsed = False
    for _ in range(max_steps):
        if t >= t_end or collapsed:
            break
        h = min(h, t_end - t)
        y_new, err = _dp_step(_xi0_rhs, y, h)
        scale = tol + tol * np.maximum(np.abs(y), np.abs(y_new))
        enorm = float(np.sqrt(np.mean((err / scale) ** 2)))
        if enorm <= 1.0 and y_new[0] > 0:
            if y_new[0] < a_floor:
                # bisect the step length to land on the floor
                lo, hi = 0.0, h
                for _ in range(60):
                    mid = 0.5 * (lo + hi)
                    y_try, _ = _dp_step(_xi0_rhs, y, mid)
                    if y_try[0] < a_floor:
                        hi = mid
                    else:
                        lo = mid
                y_new, _ = _dp_step(_xi0_rhs, y, hi)
                t += hi
                y = y_new
                collapsed = True
            else:
                t += h
                y = y_new
            states.append(GeodesicState(*y, t=t))
        if h < 1e-14 * max(1.0, abs(t)):
            if y[0] < 10 * a_floor:
                collapsed = True
                break
            raise ConvergenceError("step size underflow away from collapse")
        factor = 0.9 * enorm ** -0.2 if enorm > 0 else 5.0
        h *= min(5.0, max(0.2, factor))
    else:
        raise ConvergenceError("max_steps exceeded in geodesic integration")
    return Trajectory(tuple(states), collapsed)


# --- the antipodal-endpoint surface -------------------------------------

_SINGULAR_GUARD = 1e-3


def xi_inf_metric_factor(alpha: complex,
                         cfg: QuadratureConfig = DEFAULT_CONFIG, *,
                         allow_near_singular: bool = False) -> float:
    """Conformal factor gamma(alpha) of the antipodal two-lump metric,

        gamma = 4 int |w - 1/w|^2 / (|w + alpha|^2 + |1/w + alpha|^2)^2 dx dy,

    by doubly adaptive quadrature with panels seeded at the near-common
    roots of the map.  Diverges logarithmically at alpha = +-1; inside
    |alpha -+ 1| < 1e-3 a DivergenceError is raised unless the caller
    explicitly opts in (the line integrators do, the value is still finite).
    """
    alpha = complex(alpha)
    if min(abs(alpha - 1.0), abs(alpha + 1.0)) < _SINGULAR_GUARD \
            and not allow_near_singular:
        raise DivergenceError("metric factor blows up at alpha = +-1; "
                              f"{alpha} is inside the guard radius 1e-3")
    a = np.array([1.0, alpha, 0.0], dtype=complex)
    b = np.array([0.0, alpha, 1.0], dtype=complex)
    # d/dalpha of B/A over the common denominator: w^3 - w, stored at the
    # full degree-4 length so coefficient reversal is the exact 1/w chart
    num = np.array([0.0, 1.0, 0.0, -1.0, 0.0], dtype=complex)

    def fn(x, y):
        z = x + 1j * y
        out = np.empty(np.broadcast_shapes(x.shape, y.shape), dtype=float)
        near = np.broadcast_to(x <= 0, out.shape)
        for mask, sign, rev in ((near, 1.0, False), (~near, -1.0, True)):
            if not np.any(mask):
                continue
            w = np.exp(sign * np.broadcast_to(z, mask.shape)[mask])
            av = np.polyval(a[::-1] if rev else a, w)
            bv = np.polyval(b[::-1] if rev else b, w)
            nv = np.polyval(num[::-1] if rev else num, w)
            out[mask] = 4.0 * np.abs(nv) ** 2 / \
                (np.abs(av) ** 2 + np.abs(bv) ** 2) ** 2
        return out

    return float(integrate_cylinder(fn, cfg, peaked=True,
                                    peaks=feature_peaks(a, b)))


_LINES = {"gamma1", "gamma2", "gamma3"}


def _line_point(which: str, s: float) -> complex:
    """Real parametrisations: s is the real coordinate along the line."""
    if which == "gamma2":
        return 1j * s
    return complex(s)


def line_arc_length(which: str, s_from: float, s_to: float,
                    cfg: QuadratureConfig = DEFAULT_CONFIG, *,
                    order: int = 8) -> float:
    """Arc length of a straight-line geodesic segment, int sqrt(gamma) ds."""
    if which not in _LINES:
        raise DomainError(f"unknown line {which!r}")
    nodes, weights = np.polynomial.legendre.leggauss(order)
    mid, half = 0.5 * (s_from + s_to), 0.5 * (s_to - s_from)
    total = 0.0
    for t, wgt in zip(nodes, weights):
        g = xi_inf_metric_factor(_line_point(which, mid + half * t), cfg,
                                 allow_near_singular=True)
        total += wgt * math.sqrt(g)
    return abs(half) * total


def gamma_lines(which: str, resolution: int,
                cfg: QuadratureConfig = DEFAULT_CONFIG, *,
                eps: float = 1e-3, outer: float = 5.0):
    """Cumulative arc length table [(alpha, s)] along a named geodesic.

    gamma1 covers (1 + eps, outer], gamma3 covers [-1 + eps, 1 - eps], and
    gamma2 covers the imaginary segment [-outer i, outer i]; sampling is
    geometrically refined toward the singular endpoints alpha = +-1.
    """
    if which not in _LINES:
        raise DomainError(f"unknown line {which!r}")
    if resolution < 2:
        raise DomainError("resolution must be at least 2")
    if which == "gamma1":
        params = 1.0 + np.geomspace(eps, outer - 1.0, resolution)
    elif which == "gamma2":
        params = np.linspace(-outer, outer, resolution)
    else:
        half = np.unique(1.0 - np.geomspace(eps, 1.0, (resolution + 1) // 2))
        params = np.concatenate([-half[::-1], half[half > 0]])
    table = []
    s = 0.0
    for i, p in enumerate(params):
        if i > 0:
            s += line_arc_length(which, params[i - 1], p, cfg)
        table.append((_line_point(which, float(p)), s))
    return table


def metric_normal_derivative(alpha: complex, normal: complex,
                             cfg: QuadratureConfig = DEFAULT_CONFIG,
                             h: float = 1e-3) -> float:
    """|d gamma / dn| across a line by central differences."""
    n = complex(normal) / abs(complex(normal))
    gp = xi_inf_metric_factor(alpha + h * n, cfg, allow_near_singular=True)
    gm = xi_inf_metric_factor(alpha - h * n, cfg, allow_near_singular=True)
    return abs(gp - gm) / (2.0 * h)


def geodesy_check_line(which: str, alpha_samples,
                       cfg: QuadratureConfig = DEFAULT_CONFIG,
                       h: float = 1e-3) -> float:
    """Max transverse derivative of gamma over the samples: zero for a
    reflection-fixed line of a conformal metric, i.e. for a geodesic."""
    if which not in _LINES:
        raise DomainError(f"unknown line {which!r}")
    normal = 1.0 if which == "gamma2" else 1j
    return max(metric_normal_derivative(complex(al), normal, cfg, h)
               for al in alpha_samples)


# --- energy-density snapshots --------------------------------------------

@dataclass(frozen=True)
class GridSpec:
    x_min: float = -4.0
    x_max: float = 4.0
    nx: int = 161
    ny: int = 128


@dataclass(frozen=True)
class FieldGrid:
    """Energy density sampled on a rectangle of the cylinder."""

    x: np.ndarray
    y: np.ndarray
    values: np.ndarray          # shape (nx, ny)
    family: str = ""
    parameter: complex = 0j

    def total_energy(self) -> float:
        wx = np.full(len(self.x), self.x[1] - self.x[0])
        wx[0] *= 0.5
        wx[-1] *= 0.5
        wy = 2.0 * np.pi / len(self.y)
        return float(wx @ self.values.sum(axis=1) * wy)


_FAMILIES = {"xi0", "gamma1", "gamma2", "gamma3"}


def family_lump(family: str, parameter: complex) -> RationalLump:
    if family == "xi0":
        return symmetric_two_lump(parameter)
    if family in _LINES:
        return antipodal_two_lump(parameter)
    raise DomainError(f"unknown snapshot family {family!r}")


def scattering_snapshots(family: str, params, grid: GridSpec = GridSpec(),
                         lumps=None):
    """One FieldGrid per parameter value (or per explicit lump).

    The gamma families all sample the antipodal-endpoint maps
    (e^-z + alpha)/(e^z + alpha); the tag only records which geodesic the
    parameter list walks along.
    """
    x = np.linspace(grid.x_min, grid.x_max, grid.nx)
    y = periodic_y_grid(grid.ny)
    zz = x[:, None] + 1j * y[None, :]
    frames = []
    if lumps is None:
        lumps = [family_lump(family, p) for p in params]
    for p, lump in zip(params, lumps):
        frames.append(FieldGrid(x, y, lump.energy_density(zz),
                                family, complex(p)))
    return frames
