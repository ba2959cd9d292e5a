"""Rational-map representation of lumps on the infinite cylinder.

A degree-n lump is W(z) = B(e^z)/A(e^z) with

    A(w) = c_0 w^n + ... + c_n,      B(w) = c_{n+1} w^n + ... + c_{2n+1},

stored as the homogeneous coefficient vector (c_0, ..., c_{2n+1}); vectors
differing by a nonzero scalar denote the same lump.  The vector is valid
exactly when the Sylvester resultant of A and B is nonzero, i.e. when A, B
share no projective root and the map has genuine degree n.

Degree -n (antiholomorphic) lumps are stored as a holomorphic
representative plus a conjugation flag: the map is z -> conj(U(z)).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DomainError, InvalidLumpError
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, integrate_cylinder

RESULTANT_TOL = 1e-12


@dataclass(frozen=True)
class CylinderPoint:
    """Point x + iy on the cylinder; y is understood mod 2 pi."""

    x: float
    y: float

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)


@dataclass(frozen=True)
class TargetValue:
    """Point of the Riemann sphere: a finite complex number or infinity."""

    value: complex = 0j
    infinite: bool = False

    @classmethod
    def finite(cls, value) -> "TargetValue":
        return cls(complex(value), False)

    @classmethod
    def infinity(cls) -> "TargetValue":
        return cls(0j, True)

    @classmethod
    def projective(cls, num, den) -> "TargetValue":
        """Value num/den of the projective pair [den : num]."""
        if den == 0:
            if num == 0:
                raise ValueError("[0 : 0] is not a point of the sphere")
            return cls.infinity()
        return cls.finite(complex(num) / complex(den))

    def chordal_distance(self, other: "TargetValue") -> float:
        """Chordal metric on the unit sphere (diameter normalised to 1)."""
        if self.infinite and other.infinite:
            return 0.0
        if self.infinite:
            return 1.0 / np.sqrt(1.0 + abs(other.value) ** 2)
        if other.infinite:
            return 1.0 / np.sqrt(1.0 + abs(self.value) ** 2)
        return abs(self.value - other.value) / np.sqrt(
            (1.0 + abs(self.value) ** 2) * (1.0 + abs(other.value) ** 2))

    def __repr__(self):
        return "inf" if self.infinite else repr(self.value)


def sylvester_matrix(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Sylvester matrix of two coefficient vectors of equal length n+1."""
    n = len(a) - 1
    m = np.zeros((2 * n, 2 * n), dtype=complex)
    for i in range(n):
        m[i, i:i + n + 1] = a
        m[n + i, i:i + n + 1] = b
    return m


def _poly_derivative(c: np.ndarray) -> np.ndarray:
    if len(c) <= 1:
        return np.zeros(1, dtype=complex)
    return np.polyder(c)


@dataclass(frozen=True)
class RationalLump:
    """Immutable lump; coefficients are max-modulus normalised on entry."""

    degree: int
    coeffs: np.ndarray
    antiholomorphic: bool = field(default=False)

    def __post_init__(self):
        n = self.degree
        if n < 0:
            raise InvalidLumpError("degree must be >= 0; negative degrees "
                                   "are carried by the conjugation flag")
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape != (2 * n + 2,):
            raise InvalidLumpError(
                f"degree {n} needs {2 * n + 2} coefficients, got {c.shape}")
        top = np.max(np.abs(c))
        if top == 0.0:
            raise InvalidLumpError("all coefficients vanish")
        c = c / top
        object.__setattr__(self, "coeffs", c)
        self.coeffs.setflags(write=False)
        if n > 0 and abs(self.resultant()) <= RESULTANT_TOL:
            raise InvalidLumpError(
                f"resultant {abs(self.resultant()):.3e} below tolerance "
                f"{RESULTANT_TOL:g}: A and B share a root or the degree drops")

    @classmethod
    def from_ab(cls, a, b, antiholomorphic=False) -> "RationalLump":
        a = np.asarray(a, dtype=complex)
        b = np.asarray(b, dtype=complex)
        if a.shape != b.shape:
            raise InvalidLumpError("A and B need equal coefficient counts")
        return cls(len(a) - 1, np.concatenate([a, b]), antiholomorphic)

    @property
    def a_coeffs(self) -> np.ndarray:
        return self.coeffs[:self.degree + 1]

    @property
    def b_coeffs(self) -> np.ndarray:
        return self.coeffs[self.degree + 1:]

    def resultant(self) -> complex:
        """Sylvester determinant of (A, B); identically 1 for degree 0."""
        if self.degree == 0:
            return 1.0 + 0j
        return complex(np.linalg.det(sylvester_matrix(self.a_coeffs,
                                                      self.b_coeffs)))

    # Wronskian B'A - A'B in the w chart, and its counterpart in the
    # u = 1/w chart (coefficient-reversed polynomials).  Both have degree
    # <= 2n - 2, so the energy density takes the same rational shape in
    # either chart; the chart is picked by the sign of Re z, which keeps
    # every polynomial argument inside the unit disc.
    @cached_property
    def _wronskian(self) -> np.ndarray:
        a, b = self.a_coeffs, self.b_coeffs
        return np.polysub(np.polymul(_poly_derivative(b), a),
                          np.polymul(_poly_derivative(a), b))

    @cached_property
    def _wronskian_rev(self) -> np.ndarray:
        ar, br = self.a_coeffs[::-1], self.b_coeffs[::-1]
        return np.polysub(np.polymul(_poly_derivative(br), ar),
                          np.polymul(_poly_derivative(ar), br))

    def evaluate(self, z) -> TargetValue:
        """Value of the map at a cylinder point (complex or CylinderPoint).

        Poles are returned as the infinite TargetValue, never raised.
        """
        if isinstance(z, CylinderPoint):
            z = z.z
        z = complex(z)
        if z.real <= 0.0:
            w = np.exp(z)
            num = complex(np.polyval(self.b_coeffs, w))
            den = complex(np.polyval(self.a_coeffs, w))
        else:
            u = np.exp(-z)
            num = complex(np.polyval(self.b_coeffs[::-1], u))
            den = complex(np.polyval(self.a_coeffs[::-1], u))
        if abs(den) >= abs(num):
            val = TargetValue.finite(num / den)
        else:
            r = den / num
            val = TargetValue.infinity() if abs(r) < 1e-300 else TargetValue.finite(1.0 / r)
        if self.antiholomorphic and not val.infinite:
            val = TargetValue.finite(val.value.conjugate())
        return val

    def endpoints(self) -> tuple[TargetValue, TargetValue]:
        """Limits (l-, l+) of the map at the two ends of the cylinder."""
        n = self.degree
        c = self.coeffs
        lo = TargetValue.projective(c[2 * n + 1], c[n])
        hi = TargetValue.projective(c[n + 1], c[0])
        if self.antiholomorphic:
            lo = TargetValue.finite(lo.value.conjugate()) if not lo.infinite else lo
            hi = TargetValue.finite(hi.value.conjugate()) if not hi.infinite else hi
        return lo, hi

    def energy_density(self, z):
        """Pointwise energy density 4 |dW/dz|^2 / (1 + |W|^2)^2.

        Accepts scalar or array z = x + iy; finite everywhere including at
        poles of W (the round-metric density is chart symmetric, so it is
        evaluated from the Wronskian form, which has no poles at all).
        """
        if isinstance(z, CylinderPoint):
            z = z.z
        z = np.asarray(z, dtype=complex)
        scalar = z.ndim == 0
        z = np.atleast_1d(z)
        out = np.empty(z.shape, dtype=float)
        near = z.real <= 0.0
        for mask, sign, acoef, bcoef, wr in (
                (near, 1.0, self.a_coeffs, self.b_coeffs, self._wronskian),
                (~near, -1.0, self.a_coeffs[::-1], self.b_coeffs[::-1],
                 self._wronskian_rev)):
            if not np.any(mask):
                continue
            w = np.exp(sign * z[mask])
            den = np.abs(np.polyval(acoef, w)) ** 2 + np.abs(np.polyval(bcoef, w)) ** 2
            out[mask] = 4.0 * np.abs(w) ** 2 * np.abs(np.polyval(wr, w)) ** 2 / den ** 2
        return float(out[0]) if scalar else out

    def translated(self, lam: complex) -> "RationalLump":
        if lam == 0:
            raise DomainError("translation parameter must be nonzero")
        n = self.degree
        scale = np.asarray(lam, dtype=complex) ** np.arange(n, -1, -1)
        return RationalLump.from_ab(self.a_coeffs * scale,
                                    self.b_coeffs * scale,
                                    self.antiholomorphic)


# --- isometry tags -----------------------------------------------------

@dataclass(frozen=True)
class Translate:
    """z -> z + log(lam): rigid translation of the cylinder."""
    lam: complex


@dataclass(frozen=True)
class ReflectX:
    """z -> -conj(z): axial reflection, degree n -> -n."""


@dataclass(frozen=True)
class ReflectY:
    """z -> conj(z): angular reflection, degree n -> -n."""


@dataclass(frozen=True)
class InvertCylinder:
    """z -> -z: half-turn of the cylinder, swaps the two ends."""


@dataclass(frozen=True)
class RotateTarget:
    """Target rotation W -> (alpha W - conj(beta)) / (beta W + conj(alpha))."""
    alpha: complex
    beta: complex


@dataclass(frozen=True)
class ConjugateTarget:
    """Target reflection W -> conj(W), degree n -> -n."""


Isometry = (Translate | ReflectX | ReflectY | InvertCylinder
            | RotateTarget | ConjugateTarget)


def apply_isometry(lump: RationalLump, iso: Isometry) -> RationalLump:
    """Transformed lump; degree-reversing isometries toggle the
    antiholomorphic flag of the stored representative."""
    a, b = lump.a_coeffs, lump.b_coeffs
    flag = lump.antiholomorphic
    if isinstance(iso, Translate):
        return lump.translated(iso.lam)
    if isinstance(iso, InvertCylinder):
        return RationalLump.from_ab(a[::-1], b[::-1], flag)
    if isinstance(iso, ReflectY):
        return RationalLump.from_ab(a.conj(), b.conj(), not flag)
    if isinstance(iso, ReflectX):
        return RationalLump.from_ab(a[::-1].conj(), b[::-1].conj(), not flag)
    if isinstance(iso, ConjugateTarget):
        return RationalLump.from_ab(a, b, not flag)
    if isinstance(iso, RotateTarget):
        al, be = complex(iso.alpha), complex(iso.beta)
        if al == 0 and be == 0:
            raise DomainError("target rotation needs |alpha|^2 + |beta|^2 != 0")
        if flag:
            al, be = al.conjugate(), be.conjugate()
        return RationalLump.from_ab(be * b + al.conjugate() * a,
                                    al * b - be.conjugate() * a, flag)
    raise DomainError(f"unknown isometry {iso!r}")


def potential_energy(lump: RationalLump,
                     cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Dirichlet energy: cylinder integral of the energy density.

    Equals 4 pi n for every valid degree-n lump (Bogomolnyi equality).
    """
    if lump.degree == 0:
        return 0.0

    def fn(x, y):
        return lump.energy_density(x + 1j * y)

    return float(integrate_cylinder(fn, cfg))


# --- lump literals ------------------------------------------------------

def parse_complex(text: str) -> complex:
    """Parse 'a+bi' notation (whitespace-insensitive); bare reals allowed."""
    s = re.sub(r"\s+", "", text)
    if not s:
        raise ValueError("empty complex literal")
    s = s.replace("i", "j")
    try:
        return complex(s)
    except ValueError as exc:
        raise ValueError(f"bad complex literal {text!r}") from exc


def format_complex(z: complex) -> str:
    z = complex(z)
    if z.imag == 0:
        return repr(z.real)
    if z.real == 0:
        return f"{z.imag!r}i"
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real!r}{sign}{abs(z.imag)!r}i"


def parse_lump(text: str) -> RationalLump:
    """Parse the literal 'n; c0, c1, ..., c_{2n+1}'."""
    head, _, tail = text.partition(";")
    if not tail:
        raise ValueError("lump literal must look like 'n; c0, c1, ...'")
    n = int(head.strip())
    coeffs = [parse_complex(tok) for tok in tail.split(",")]
    return RationalLump(n, np.array(coeffs, dtype=complex))


def format_lump(lump: RationalLump) -> str:
    body = ", ".join(format_complex(c) for c in lump.coeffs)
    return f"{lump.degree}; {body}"


def _roots_descending(c: np.ndarray) -> np.ndarray:
    c = np.trim_zeros(np.asarray(c, complex), "f")
    if len(c) <= 1:
        return np.zeros(0, dtype=complex)
    return np.roots(c)


def feature_peaks(a: np.ndarray, b: np.ndarray):
    """Points (x0, y0, width) on the cylinder where |A|^2 + |B|^2 nearly
    vanishes.  At a simple root w0 of A the denominator behaves like
    |A'(w0)|^2 |w - w0|^2 + |B(w0)|^2, so energy and metric integrands
    concentrate there in a spot of w-radius |B(w0)| / |A'(w0)|; the
    adaptive quadrature seeds its initial panel edges at that scale."""
    peaks = []
    for mine, other in ((a, b), (b, a)):
        dmine = _poly_derivative(mine)
        for w0 in _roots_descending(mine):
            slope = abs(np.polyval(dmine, w0))
            level = abs(np.polyval(other, w0))
            width = level / slope if slope > 0 else 1.0
            r = max(abs(w0), 1e-12)
            peaks.append((np.log(r), float(np.angle(w0)),
                          min(max(width / r, 1e-12), 1.0)))
    return peaks


def random_lump(rng, degree: int, min_resultant: float = 0.05,
                min_feature: float = 0.15,
                antiholomorphic: bool = False) -> RationalLump:
    """Random valid lump with a comfortably nonzero resultant and no
    energy feature narrower than min_feature; the margins keep zeros and
    poles separated so fixed-grid quadratures stay well conditioned."""
    for _ in range(1000):
        size = 2 * degree + 2
        c = rng.normal(size=size) + 1j * rng.normal(size=size)
        try:
            lump = RationalLump(degree, c, antiholomorphic)
        except InvalidLumpError:
            continue
        if degree == 0:
            return lump
        if abs(lump.resultant()) < min_resultant:
            continue
        widths = [w for _, _, w in feature_peaks(lump.a_coeffs, lump.b_coeffs)]
        if not widths or min(widths) >= min_feature:
            return lump
    raise RuntimeError("failed to sample a valid lump")


# --- named two-lump families -------------------------------------------

def symmetric_two_lump(alpha: complex) -> RationalLump:
    """W(z) = alpha sech z: the equal-endpoint two-lump family."""
    if alpha == 0:
        raise DomainError("alpha must be nonzero")
    return RationalLump.from_ab([1, 0, 1], [0, 2 * complex(alpha), 0])


def antipodal_two_lump(alpha: complex) -> RationalLump:
    """W(z) = (e^-z + alpha)/(e^z + alpha): antipodal-endpoint family,
    degenerate at alpha = +-1."""
    alpha = complex(alpha)
    return RationalLump.from_ab([1, alpha, 0], [0, alpha, 1])
