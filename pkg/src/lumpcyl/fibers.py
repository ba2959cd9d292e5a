"""The L2 metric on fixed-endpoint moduli spaces of lumps.

A fibre of degree n with endpoints (p, 0) carries the affine coordinates

    zeta_k = c_k / c_0,  k = 1, ..., 2n+1,

constrained by zeta_{n+1} = 0 (endpoint 0 at the far end) and by the
p-relation that eliminates zeta_{2n+1} = p zeta_n (finite p) or zeta_n = 0
(p infinite).  The 2n-1 remaining zeta_k are the free coordinates; the
metric components are cylinder integrals

    gamma_ij = int 4 (dW/dzeta_i) conj(dW/dzeta_j) / (1 + |W|^2)^2 dx dy,

evaluated here with analytic zeta-derivatives of the rational
parametrisation.  The module also carries the named collapse paths whose
finite length exhibits the incompleteness of every multilump metric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ConvergenceError, DivergenceError, DomainError, InvalidLumpError
from .lumps import RationalLump, TargetValue, feature_peaks
from .quadrature import (DEFAULT_CONFIG, QuadratureConfig,
                         fixed_panel_integrate_cylinder, gauss_panels,
                         integrate_cylinder)


def free_indices(degree: int, p_infinite: bool) -> tuple[int, ...]:
    """Indices k of the free coordinates zeta_k on the (p, 0) fibre."""
    n = degree
    if n < 1:
        raise DomainError("fibre coordinates need degree >= 1")
    if p_infinite:
        return tuple(range(1, n)) + tuple(range(n + 2, 2 * n + 2))
    return tuple(range(1, n + 1)) + tuple(range(n + 2, 2 * n + 1))


@dataclass(frozen=True)
class FiberCoordinates:
    """A point of the fixed-endpoint moduli space in the affine chart.

    ``zeta`` lists the values of the free coordinates in the order given
    by :func:`free_indices`.  The second endpoint is fixed at 0 (any fibre
    is isometric to one of this form via target rotations).
    """

    degree: int
    p: TargetValue
    zeta: tuple
    q: TargetValue = field(default_factory=lambda: TargetValue.finite(0))

    def __post_init__(self):
        if self.q.infinite or self.q.value != 0:
            raise DomainError("only the q = 0 chart is implemented; move the "
                              "second endpoint to 0 with a target rotation")
        object.__setattr__(self, "zeta", tuple(complex(z) for z in self.zeta))
        want = len(free_indices(self.degree, self.p.infinite))
        if len(self.zeta) != want:
            raise DomainError(f"degree {self.degree} fibre has {want} free "
                              f"coordinates, got {len(self.zeta)}")

    @property
    def indices(self) -> tuple[int, ...]:
        return free_indices(self.degree, self.p.infinite)

    def coefficient_vector(self) -> np.ndarray:
        """Homogeneous (c_0, ..., c_{2n+1}) reconstructed from the chart."""
        n = self.degree
        c = np.zeros(2 * n + 2, dtype=complex)
        c[0] = 1.0
        for k, val in zip(self.indices, self.zeta):
            c[k] = val
        if not self.p.infinite:
            c[2 * n + 1] = self.p.value * c[n]
        return c

    def replace_zeta(self, pos: int, value: complex) -> "FiberCoordinates":
        z = list(self.zeta)
        z[pos] = value
        return FiberCoordinates(self.degree, self.p, tuple(z), self.q)


def lump_from_coords(coords: FiberCoordinates) -> RationalLump:
    """Reconstruct the lump; raises InvalidLumpError on resultant-zero
    points or if the endpoints fail to match the fibre labels."""
    n = coords.degree
    lump = RationalLump(n, coords.coefficient_vector())
    lo, hi = lump.endpoints()
    if hi.chordal_distance(TargetValue.finite(0)) > 1e-12 or \
            lo.chordal_distance(coords.p) > 1e-12:
        raise InvalidLumpError("reconstructed endpoints do not match the fibre")
    return lump


def _monomial(power: int, length: int) -> np.ndarray:
    v = np.zeros(length, dtype=complex)
    v[length - 1 - power] = 1.0
    return v


def _tangent_polys(coords: FiberCoordinates) -> list[np.ndarray]:
    """q_i = (dB/dzeta_i) A - B (dA/dzeta_i), one per free coordinate.

    The zeta_i derivative of W = B/A is q_i / A^2; all metric integrands
    are built from these degree <= 2n numerator polynomials.
    """
    n = coords.degree
    c = coords.coefficient_vector()
    a, b = c[:n + 1], c[n + 1:]
    out = []
    for k in coords.indices:
        da = _monomial(n - k, n + 1) if k <= n else np.zeros(n + 1, complex)
        if k >= n + 1:
            db = _monomial(2 * n + 1 - k, n + 1)
        elif k == n and not coords.p.infinite:
            db = coords.p.value * _monomial(0, n + 1)
        else:
            db = np.zeros(n + 1, complex)
        out.append(np.polysub(np.polymul(db, a), np.polymul(da, b)))
    return out


class _MetricIntegrand:
    """Vector integrand of all requested metric entries at once.

    Evaluation switches to the u = 1/w chart for x > 0: every polynomial
    here has a fixed representation length, so the chart change is exact
    coefficient reversal and no large powers of e^x ever appear.
    """

    def __init__(self, coords: FiberCoordinates, pairs):
        n = coords.degree
        c = coords.coefficient_vector()
        self.a, self.b = c[:n + 1], c[n + 1:]
        qs = _tangent_polys(coords)
        self.q = [np.pad(q, (2 * n + 1 - len(q), 0)) for q in qs]
        self.pairs = pairs

    def __call__(self, x, y):
        z = x + 1j * y
        out = np.empty(np.broadcast_shapes(x.shape, y.shape) + (len(self.pairs),),
                       dtype=complex)
        near = np.broadcast_to(x <= 0, out.shape[:-1])
        for mask, sign, rev in ((near, 1.0, False), (~near, -1.0, True)):
            if not np.any(mask):
                continue
            w = np.exp(sign * np.broadcast_to(z, mask.shape)[mask])
            a = self.a[::-1] if rev else self.a
            b = self.b[::-1] if rev else self.b
            den = (np.abs(np.polyval(a, w)) ** 2
                   + np.abs(np.polyval(b, w)) ** 2) ** 2
            qv = [np.polyval(q[::-1] if rev else q, w) for q in self.q]
            for m, (i, j) in enumerate(self.pairs):
                out[mask, m] = 4.0 * qv[i] * np.conj(qv[j]) / den
        return out


@dataclass(frozen=True)
class HermitianMetric:
    """Metric components gamma_ij at a point, dim = 2n - 1."""

    dim: int
    entries: np.ndarray

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))

    def min_eigenvalue(self) -> float:
        sym = 0.5 * (self.entries + self.entries.conj().T)
        return float(np.linalg.eigvalsh(sym)[0])


def metric_components(coords: FiberCoordinates,
                      cfg: QuadratureConfig = DEFAULT_CONFIG, *,
                      independent_entries: bool = False,
                      frozen_panels: bool = False) -> HermitianMetric:
    """Metric matrix by cylinder quadrature, error <= cfg.rel_tol per entry.

    By default the lower triangle is filled by conjugate symmetry; with
    independent_entries every entry is integrated separately (used to test
    hermiticity rather than build it in).  frozen_panels switches to the
    non-adaptive rule whose error is smooth in the coordinates, which is
    what finite differencing across nearby points needs.
    """
    lump_from_coords(coords)            # validity gate
    dim = len(coords.zeta)
    if independent_entries:
        pairs = [(i, j) for i in range(dim) for j in range(dim)]
    else:
        pairs = [(i, j) for i in range(dim) for j in range(i, dim)]
    fn = _MetricIntegrand(coords, pairs)
    if frozen_panels:
        vals = fixed_panel_integrate_cylinder(fn, cfg)
    else:
        vals = integrate_cylinder(fn, cfg)
    g = np.zeros((dim, dim), dtype=complex)
    for v, (i, j) in zip(vals, pairs):
        g[i, j] = v
        if not independent_entries and i != j:
            g[j, i] = v.conjugate()
    return HermitianMetric(dim, g)


def mass(lump: RationalLump, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """L2 norm squared of the unit translation vector field at the lump.

    The translation tangent is -dW/dz, whose norm integrand coincides with
    the energy density; the Bogomolnyi equality then pins the value at
    4 pi n.  Uses the doubly adaptive scheme so that it constitutes a
    genuinely different numerical route from potential_energy.
    """
    if lump.degree == 0:
        return 0.0

    def fn(x, y):
        return lump.energy_density(x + 1j * y)

    peaks = feature_peaks(lump.a_coeffs, lump.b_coeffs)
    return float(integrate_cylinder(fn, cfg, peaked=True, peaks=peaks))


def _wirtinger_columns(h: float):
    # offsets and weights of the central-difference Wirtinger derivative
    return ((h, 0.25 / h), (-h, -0.25 / h), (1j * h, -0.25j / h),
            (-1j * h, 0.25j / h))


def kahler_check(coords: FiberCoordinates,
                 cfg: QuadratureConfig = DEFAULT_CONFIG,
                 h: float = 1e-4) -> float:
    """Max over (i, j, k) of |d gamma_ij / d zeta_k - d gamma_kj / d zeta_i|.

    Central differences with step h in each free coordinate; a small value
    certifies the Kahler symmetry of the metric at the point.  The frozen
    panel rule keeps the quadrature error a smooth function of zeta, so it
    cancels in the differences instead of polluting them.
    """
    dim = len(coords.zeta)
    deriv = np.empty((dim, dim, dim), dtype=complex)   # [k, i, j]
    for k in range(dim):
        acc = np.zeros((dim, dim), dtype=complex)
        for off, wgt in _wirtinger_columns(h):
            shifted = coords.replace_zeta(k, coords.zeta[k] + off)
            acc += wgt * metric_components(shifted, cfg,
                                           frozen_panels=True).entries
        deriv[k] = acc
    res = 0.0
    for k in range(dim):
        for i in range(dim):
            res = max(res, float(np.max(np.abs(deriv[k][i] - deriv[i][k]))))
    return res


# --- collapse paths and path length -------------------------------------

@dataclass(frozen=True)
class ModuliPath:
    """Curve t -> lump on a fixed-endpoint fibre, given by coefficient
    polynomials A_t, B_t and their t-derivatives."""

    t_start: float
    t_end: float
    open_end: bool
    degree: int
    coefficients: callable       # t -> (a, b, da_dt, db_dt), descending
    label: str = ""

    def lump(self, t: float) -> RationalLump:
        a, b, _, _ = self.coefficients(t)
        return RationalLump.from_ab(a, b)

    def speed_squared(self, t: float,
                      cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
        """gamma(d/dt, d/dt) = int 4 |dW_t/dt|^2 / (1 + |W_t|^2)^2."""
        a, b, da, db = (np.asarray(v, complex) for v in self.coefficients(t))
        if not (np.any(da) or np.any(db)):
            return 0.0
        num = np.polysub(np.polymul(db, a), np.polymul(da, b))
        num = np.pad(num, (2 * self.degree + 1 - len(num), 0))

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

        peaks = feature_peaks(a, b)
        return float(integrate_cylinder(fn, cfg, peaked=True, peaks=peaks))

    def speed(self, t, cfg=DEFAULT_CONFIG):
        return math.sqrt(max(self.speed_squared(t, cfg), 0.0))


def constant_path(lump: RationalLump, t_start=0.0, t_end=1.0) -> ModuliPath:
    a = np.asarray(lump.a_coeffs, complex)
    b = np.asarray(lump.b_coeffs, complex)
    zero = np.zeros_like(a)

    return ModuliPath(t_start, t_end, False, lump.degree,
                      lambda t: (a, b, zero, zero), "constant")


def collapse_path(family: str, n: int, p: complex | None = None) -> ModuliPath:
    """The named finite-length paths leaving the moduli space.

    gamma0   : t in [1, inf),  W_t = 2w / (t (w^n + 1)),        p = 0
    gamma_p  : t in [1/2, 1),  W_t = t p (t w + 1) / ((1-w)^{n-1} (w+t))
    gamma_inf: t in [1/2, 1),  W_t = (t w + 1) / (w^{n-1} (w+t)), p = inf

    The limit endpoint is outside the moduli space: lump(t_end) raises
    InvalidLumpError (degree drop).  Requires n >= 2.
    """
    if n < 2:
        raise DomainError("collapse paths exist for n >= 2 only")

    if family == "gamma0":
        ring = np.zeros(n + 1, complex)
        ring[0] = ring[-1] = 1.0
        bvec = 2.0 * _monomial(1, n + 1)
        zero = np.zeros(n + 1, complex)

        def coeff0(t):
            return t * ring, bvec, ring, zero

        return ModuliPath(1.0, math.inf, True, n, coeff0, "gamma0")

    if family == "gamma_p":
        if p is None or complex(p) == 0 or not math.isfinite(abs(complex(p))):
            raise DomainError("gamma_p needs a finite nonzero endpoint p")
        pv = complex(p)
        base = np.array([1.0], complex)
        for _ in range(n - 1):
            base = np.polymul(base, np.array([-1.0, 1.0], complex))  # (1 - w)
        a_shift = np.pad(base, (0, 1))                  # (1-w)^{n-1} * w
        a_const = np.pad(base, (1, 0))                  # (1-w)^{n-1}

        def coeffp(t):
            a = a_shift + t * a_const
            b = pv * t * t * _monomial(1, n + 1) + pv * t * _monomial(0, n + 1)
            db = 2.0 * pv * t * _monomial(1, n + 1) + pv * _monomial(0, n + 1)
            return a, b, a_const, db

        return ModuliPath(0.5, 1.0, True, n, coeffp, "gamma_p")

    if family == "gamma_inf":
        def coeffi(t):
            a = _monomial(n, n + 1) + t * _monomial(n - 1, n + 1)
            b = t * _monomial(1, n + 1) + _monomial(0, n + 1)
            return a, b, _monomial(n - 1, n + 1), _monomial(1, n + 1)

        return ModuliPath(0.5, 1.0, True, n, coeffi, "gamma_inf")

    raise DomainError(f"unknown collapse family {family!r}")


def path_length(path: ModuliPath, cfg: QuadratureConfig = DEFAULT_CONFIG, *,
                t_start: float | None = None, t_end: float | None = None,
                speed_cfg=None, max_doublings: int = 40) -> float:
    """Length of the path in the L2 metric.

    A finite truncation [t_start, t_end] integrates directly; the improper
    endpoint of an open path is approached by geometric subdivision,
    declaring convergence when increments fall below tolerance and
    divergence when partial sums keep growing through five consecutive
    doublings after the budget is spent.
    """
    speed_cfg = speed_cfg or cfg

    def seg(lo, hi):
        # integrate in log t across wide ranges: collapse speeds decay
        # polynomially, which the substitution turns into a mild integrand
        if lo > 0 and hi / lo >= 4.0:
            def f(taus):
                ts = np.exp(taus)
                return np.array([path.speed(t, speed_cfg) * t for t in ts])

            val, _ = gauss_panels(f, math.log(lo), math.log(hi), panels=4,
                                  rel_tol=cfg.rel_tol * 10, abs_tol=1e-12,
                                  max_refinements=10, order=8)
        else:
            def f(ts):
                return np.array([path.speed(t, speed_cfg) for t in ts])

            val, _ = gauss_panels(f, lo, hi, panels=2, rel_tol=cfg.rel_tol * 10,
                                  abs_tol=1e-12, max_refinements=10, order=8)
        return float(val)

    lower = path.t_start if t_start is None else t_start
    upper = path.t_end if t_end is None else t_end
    if upper < lower or lower < path.t_start:
        raise DomainError("truncation outside the path domain")
    proper = math.isfinite(upper) and (upper < path.t_end or not path.open_end)
    if proper:
        return seg(lower, upper) if upper > lower else 0.0

    total = 0.0
    increments = []
    t_lo = lower
    for k in range(max_doublings + 5):
        if math.isinf(path.t_end):
            t_hi = lower * 2.0 ** (k + 1) if lower > 0 else 2.0 ** k
        else:
            t_hi = path.t_end - (path.t_end - lower) * 0.5 ** (k + 1)
        inc = seg(t_lo, t_hi)
        total += inc
        increments.append(inc)
        t_lo = t_hi
        if inc <= cfg.rel_tol * max(abs(total), 1e-30):
            return total
        if k >= max_doublings:
            tail = increments[-5:]
            if len(tail) == 5 and all(i > cfg.rel_tol * abs(total) for i in tail):
                raise DivergenceError(
                    f"length of {path.label or 'path'} keeps growing "
                    f"({total:.6g} after {k + 1} doublings)")
    raise ConvergenceError("path length failed to settle within the "
                           "doubling budget")
