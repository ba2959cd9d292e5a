"""Closed-form geometry of the totally geodesic two-lump surface with
equal endpoints (the alpha sech z family).

The induced metric is I(a) (da^2 + a^2 dtheta^2) with a = |alpha| and

    I(a) = 8 pi (E(k) - K(k)) / (a^4 - 1),        k = sqrt(1 - a^4),  a <= 1
    I(a) = 8 pi (a^2 E(k) - a^-2 K(k)) / (a^4 - 1), k = sqrt(1 - a^-4), a > 1.

Both branches are 0/0 at a = 1; near there the function is evaluated from
its Taylor series in eps = a^4 - 1 (I is real-analytic across a = 1, with
I(1) = 2 pi^2).  First and second derivatives are propagated analytically
through the elliptic-integral derivative identities with small order-2
jets, never by finite differences: the curvature

    R(a) = -(1/2aI) d/da ( a d/da log I(a) )

is the Gauss curvature of the surface (the convention under which the
total curvature integral equals the Gauss-Bonnet value 2 pi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .elliptic import ellip_e_complement, ellip_k_complement, f_closed
from .errors import DomainError, LumpcylError
from .quadrature import (DEFAULT_CONFIG, QuadratureConfig, gauss_panels,
                         integrate_cylinder)

_EIGHT_PI = 8.0 * math.pi


class _Jet:
    """Value and first two derivatives with respect to one real variable."""

    __slots__ = ("v", "d1", "d2")

    def __init__(self, v, d1=0.0, d2=0.0):
        self.v, self.d1, self.d2 = float(v), float(d1), float(d2)

    def __add__(self, o):
        o = o if isinstance(o, _Jet) else _Jet(o)
        return _Jet(self.v + o.v, self.d1 + o.d1, self.d2 + o.d2)

    __radd__ = __add__

    def __neg__(self):
        return _Jet(-self.v, -self.d1, -self.d2)

    def __sub__(self, o):
        return self + (-o if isinstance(o, _Jet) else _Jet(-o))

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        o = o if isinstance(o, _Jet) else _Jet(o)
        return _Jet(self.v * o.v,
                    self.d1 * o.v + self.v * o.d1,
                    self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = o if isinstance(o, _Jet) else _Jet(o)
        v = self.v / o.v
        d1 = (self.d1 - v * o.d1) / o.v
        d2 = (self.d2 - 2.0 * d1 * o.d1 - v * o.d2) / o.v
        return _Jet(v, d1, d2)

    def __rtruediv__(self, o):
        return _Jet(o) / self


def _elliptic_jets(kp, kv, kd1, kd2):
    """Jets of K and E along a modulus path k(a).

    kp is the complementary modulus, exact where k -> 1; kv = sqrt(1-kp^2)
    may round to 1 harmlessly (it never multiplies a vanishing factor).
    kd1, kd2 are d k / d a and its derivative.
    """
    K, E = ellip_k_complement(kp), ellip_e_complement(kp)
    kc2 = kp * kp
    K1 = (E - kc2 * K) / (kv * kc2)
    E1 = (E - K) / kv
    E2 = (-kv * kv * E / kc2 - (E - K)) / (kv * kv)
    num = kv * K * (kv * kc2) - (E - kc2 * K) * (1.0 - 3.0 * kv * kv)
    K2 = num / (kv * kc2) ** 2
    Kjet = _Jet(K, K1 * kd1, K2 * kd1 * kd1 + K1 * kd2)
    Ejet = _Jet(E, E1 * kd1, E2 * kd1 * kd1 + E1 * kd2)
    return Kjet, Ejet


# Taylor coefficients of I(a)/(4 pi^2) in eps = a^4 - 1, from the
# hypergeometric expansion of (E - K)/k^2 at small modulus:
# I = 4 pi^2 sum_m (-1)^m (2(m+1)/(2m+1)) c_{m+1} eps^m,
# c_j = ((2j-1)!! / (2j)!!)^2.
def _series_coefficients(terms=6):
    out = []
    for m in range(terms):
        j = m + 1
        cj = (Fraction(math.prod(range(1, 2 * j, 2)),
                       math.prod(range(2, 2 * j + 1, 2)))) ** 2
        out.append(float((-1) ** m * Fraction(2 * j, 2 * j - 1) * cj))
    return out


_TAYLOR = _series_coefficients()
_TAYLOR_HALFWIDTH = 1e-3


def _conformal_jet(a: float) -> _Jet:
    if not a > 0.0:
        raise DomainError("the radial coordinate requires a > 0")
    aj = _Jet(a, 1.0, 0.0)
    if abs(a - 1.0) < _TAYLOR_HALFWIDTH:
        eps = aj * aj * aj * aj - 1.0
        acc = _Jet(_TAYLOR[-1])
        for c in reversed(_TAYLOR[:-1]):
            acc = acc * eps + c
        return 4.0 * math.pi ** 2 * acc
    if a < 1.0:
        kp = a * a                       # exact complementary modulus
        kv = math.sqrt((1.0 - kp) * (1.0 + kp))
        kd1 = -2.0 * a ** 3 / kv
        kd2 = -6.0 * a * a / kv - 4.0 * a ** 6 / kv ** 3
        Kj, Ej = _elliptic_jets(kp, kv, kd1, kd2)
        return _EIGHT_PI * (Ej - Kj) / (aj * aj * aj * aj - 1.0)
    kp = 1.0 / (a * a)
    kv = math.sqrt((1.0 - kp) * (1.0 + kp))
    kd1 = 2.0 / (a ** 5 * kv)
    kd2 = -10.0 / (a ** 6 * kv) - 4.0 / (a ** 10 * kv ** 3)
    Kj, Ej = _elliptic_jets(kp, kv, kd1, kd2)
    a2 = aj * aj
    return _EIGHT_PI * (a2 * Ej - Kj / a2) / (a2 * a2 - 1.0)


def conformal_factor(a: float) -> float:
    """The conformal factor I(a) of the metric; I(1) = 2 pi^2."""
    return _conformal_jet(a).v


def conformal_derivatives(a: float) -> tuple[float, float, float]:
    """(I, I', I'') by analytic differentiation of the closed form."""
    j = _conformal_jet(a)
    return j.v, j.d1, j.d2


def log_derivative(a: float) -> float:
    """d/da log I(a); tends to -4/a at 0+ only logarithmically slowly."""
    j = _conformal_jet(a)
    return j.d1 / j.v


def scalar_curvature(a: float) -> float:
    """Gauss curvature R(a) > 0; diverges at a -> 0+, vanishes at infinity."""
    I, I1, I2 = conformal_derivatives(a)
    dlog = I1 / I
    dlog2 = I2 / I - dlog * dlog        # (log I)''
    return -(dlog + a * dlog2) / (2.0 * a * I)


def effective_potential(a: float) -> float:
    """U_eff(a) = 1 / (2 a^2 I(a)); decreasing, asymptote 1/(16 pi)."""
    if not a > 0.0:
        raise DomainError("the radial coordinate requires a > 0")
    return 1.0 / (2.0 * a * a * conformal_factor(a))


def _radial_boundary_term(a: float) -> float:
    return a * log_derivative(a)


def total_curvature(cfg: QuadratureConfig = DEFAULT_CONFIG, *,
                    a_lo: float = 1e-3, a_hi: float = 1e3) -> float:
    """Total curvature of the surface: the Gauss-Bonnet value 2 pi.

    The area element is I(a) a da dtheta, so the integral is
    2 pi int R I a da.  R I a = -(1/2) d/da (a dlogI/da) is a total
    derivative whose boundary value at 0 decays only like 1/log a, far
    too slowly to truncate numerically; the window [a_lo, a_hi] is
    integrated by quadrature and the two tails are added in closed form
    from the antiderivative.  The quadrature-vs-antiderivative match on
    the window is what the 2 pi test actually exercises.
    """
    def integrand(rho):
        out = np.empty_like(rho)
        for i, r in enumerate(rho):
            a = math.exp(r)
            out[i] = scalar_curvature(a) * conformal_factor(a) * a * a
        return out

    mid, _ = gauss_panels(integrand, math.log(a_lo), math.log(a_hi),
                          panels=max(cfg.x_panels // 4, 8),
                          rel_tol=cfg.rel_tol,
                          max_refinements=cfg.max_refinements)
    tail_lo = -math.pi * _radial_boundary_term(a_lo)          # exact 2pi*int_0^lo
    tail_hi = math.pi * (2.0 + _radial_boundary_term(a_hi))   # exact 2pi*int_hi^inf
    return 2.0 * math.pi * float(mid) + tail_lo + tail_hi


@dataclass(frozen=True)
class EmbeddingProfile:
    """Samples of the isometric surface of revolution in R^3:
    (a, theta) -> (radius(a) cos theta, radius(a) sin theta, height(a))."""

    a: np.ndarray
    radius: np.ndarray
    height: np.ndarray


def _height_integrand(a: float) -> float:
    I, I1, _ = conformal_derivatives(a)
    radicand = -a * I1 - a * a * I1 * I1 / (4.0 * I)
    if radicand < -1e-12 * max(abs(a * I1), 1.0):
        raise LumpcylError(f"embedding condition violated at a = {a:g}: "
                           f"radicand {radicand:.3e}")
    return math.sqrt(max(radicand, 0.0))


def embedding_profile(a_min: float, a_max: float,
                      n_samples: int = 400) -> EmbeddingProfile:
    """Profile on a log-spaced grid with height(a_min) = 0.

    Verifies the embedding inequality d/da log I >= -4/a at every sample
    (its failure would make the height integrand imaginary).
    """
    if not (0 < a_min < a_max):
        raise DomainError("need 0 < a_min < a_max")
    grid = np.geomspace(a_min, a_max, n_samples)
    radius = np.array([a * math.sqrt(conformal_factor(a)) for a in grid])
    for a in grid:
        if a * log_derivative(a) + 4.0 < -1e-10:
            raise LumpcylError(f"embedding condition fails at a = {a:g}")
    nodes, weights = np.polynomial.legendre.leggauss(10)
    height = np.zeros_like(grid)
    for i in range(1, len(grid)):
        lo, hi = grid[i - 1], grid[i]
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        vals = [_height_integrand(mid + half * t) for t in nodes]
        height[i] = height[i - 1] + half * float(np.dot(weights, vals))
    return EmbeddingProfile(grid, radius, height)


def conformal_factor_quadrature(a: float,
                                cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Independent oracle: direct 2D quadrature of the defining integral

        I(a) = 4 int |sech z|^2 / (1 + a^2 |sech z|^2)^2 dx dy

    over the cylinder, with no elliptic functions involved.
    """
    if not a > 0.0:
        raise DomainError("the radial coordinate requires a > 0")
    a2 = a * a

    def fn(x, y):
        w = np.exp(x + 1j * y)
        s = np.abs(w * w + 1.0) ** 2
        r = np.abs(w) ** 2
        return 16.0 * r * s / (s + 4.0 * a2 * r) ** 2

    return float(integrate_cylinder(fn, cfg))


def conformal_factor_from_f(a: float, step: float = 1e-6) -> float:
    """Third route to I(a) through the regulated integral machinery:
    I(a) = 16 f(a^2) + 16 a^2 f'(a^2), with f' by central differences of
    the closed form of f.  A consistency hook, not a primary evaluator.
    """
    if not a > 0.0:
        raise DomainError("the radial coordinate requires a > 0")
    t = a * a
    h = step * max(1.0, t)
    fprime = (f_closed(t + h) - f_closed(t - h)) / (2.0 * h)
    return 16.0 * f_closed(t) + 16.0 * t * fprime
