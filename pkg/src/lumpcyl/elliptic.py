"""Complete elliptic integrals and the auxiliary function f(t).

K and E are evaluated by the arithmetic-geometric mean iteration, which
converges quadratically on the whole modulus range [0, 1).  The closed form

    f(t) = (pi/2) K(sqrt(1-t^2))        0 < t <= 1
    f(t) = (pi/2t) K(sqrt(1-t^-2))      t > 1

is paired with a brute-force quadrature of its defining integral

    f(t) = int_0^1 ( 1/(k+t) + 1/(1+t k) ) K(k) dk,

so each side can serve as an oracle for the other; the quadrature resolves
the logarithmic singularity of K at k = 1 with an exponential change of
variable on the last subinterval.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ConvergenceError, DomainError
from .quadrature import DEFAULT_CONFIG, QuadratureConfig, gauss_panels

_AGM_MAX_ITER = 64


def _agm_core(b0: np.ndarray, c0: np.ndarray):
    """AGM iteration from (1, b0, c0); returns the mean and sum(2^{n-1} c_n^2).

    The c sequence uses c_{n+1} = c_n^2 / (4 a_{n+1}), which is exactly
    (a_n - b_n)/2 but free of the cancellation that costs E several digits
    near k = 1.
    """
    a = np.ones_like(b0)
    b = np.asarray(b0, dtype=float).copy()
    c = np.asarray(c0, dtype=float).copy()
    csum = 0.5 * c * c
    power = 0.5
    for _ in range(_AGM_MAX_ITER):
        if np.all(np.abs(c) <= 1e-17 * a):
            break
        a_next = 0.5 * (a + b)
        c = c * c / (4.0 * a_next)
        b = np.sqrt(a * b)
        a = a_next
        power *= 2.0
        csum = csum + power * c * c
    return a, csum


def _agm_sequences(k: np.ndarray):
    return _agm_core(np.sqrt((1.0 - k) * (1.0 + k)), k)


def ellip_k(k):
    """Legendre's complete elliptic integral of the first kind, K(k).

    Modulus convention (not the parameter m = k^2).  Requires 0 <= k < 1.
    """
    arr = np.asarray(k, dtype=float)
    if np.any(arr < 0.0) or np.any(arr >= 1.0):
        raise DomainError("ellip_k requires 0 <= k < 1")
    mean, _ = _agm_sequences(np.atleast_1d(arr))
    out = np.pi / (2.0 * mean)
    return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)


def ellip_e(k):
    """Legendre's complete elliptic integral of the second kind, E(k).

    Requires 0 <= k <= 1; E(1) = 1 exactly.
    """
    arr = np.asarray(k, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise DomainError("ellip_e requires 0 <= k <= 1")
    flat = np.atleast_1d(arr).copy()
    one = flat == 1.0
    flat[one] = 0.0                       # placeholder, overwritten below
    mean, csum = _agm_sequences(flat)
    out = (np.pi / (2.0 * mean)) * (1.0 - csum)
    out[one] = 1.0
    return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)


def ellip_k_complement(kp):
    """K at modulus k = sqrt(1 - kp^2), taking the complementary modulus
    directly.  Near k = 1 this is the only accurate entry point: forming
    sqrt(1 - k^2) in floating point destroys kp, while the AGM consumes it
    untouched as its initial geometric term."""
    arr = np.asarray(kp, dtype=float)
    if np.any(arr <= 0.0) or np.any(arr > 1.0):
        raise DomainError("ellip_k_complement requires 0 < kp <= 1")
    flat = np.atleast_1d(arr)
    mean, _ = _agm_core(flat, np.sqrt((1.0 - flat) * (1.0 + flat)))
    out = np.pi / (2.0 * mean)
    return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)


def ellip_e_complement(kp):
    """E at modulus k = sqrt(1 - kp^2); see ellip_k_complement."""
    arr = np.asarray(kp, dtype=float)
    if np.any(arr <= 0.0) or np.any(arr > 1.0):
        raise DomainError("ellip_e_complement requires 0 < kp <= 1")
    flat = np.atleast_1d(arr)
    mean, csum = _agm_core(flat, np.sqrt((1.0 - flat) * (1.0 + flat)))
    out = (np.pi / (2.0 * mean)) * (1.0 - csum)
    return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)


def ellip_k_derivative(k):
    """dK/dk via the identity dK/dk = (E - (1-k^2) K) / (k (1-k^2)).

    Requires 0 < k < 1; the identity is 0/0 at both endpoints (the k -> 0
    limit is 0 since K is even in k).
    """
    arr = np.asarray(k, dtype=float)
    if np.any(arr <= 0.0) or np.any(arr >= 1.0):
        raise DomainError("ellip_k_derivative requires 0 < k < 1")
    kc2 = (1.0 - arr) * (1.0 + arr)
    return (ellip_e(arr) - kc2 * ellip_k(arr)) / (arr * kc2)


def ellip_e_derivative(k):
    """dE/dk = (E - K)/k for 0 < k < 1."""
    arr = np.asarray(k, dtype=float)
    if np.any(arr <= 0.0) or np.any(arr >= 1.0):
        raise DomainError("ellip_e_derivative requires 0 < k < 1")
    return (ellip_e(arr) - ellip_k(arr)) / arr


def landen_descend(k):
    """One step of Landen's descending transformation.

    Returns c = (1 - k')/(1 + k') with k' = sqrt(1 - k^2), satisfying
    K(k) = 2/(1 + k') K(c).  Requires 0 <= k < 1.
    """
    arr = np.asarray(k, dtype=float)
    if np.any(arr < 0.0) or np.any(arr >= 1.0):
        raise DomainError("landen_descend requires 0 <= k < 1")
    kp = np.sqrt((1.0 - arr) * (1.0 + arr))
    out = (1.0 - kp) / (1.0 + kp)
    return float(out) if arr.ndim == 0 else out


_BRANCH_GUARD = 1e-8


def f_closed(t: float) -> float:
    """Closed form of f(t); continuous at t = 1 with f(1) = pi^2/4.

    Within 1e-8 of t = 1 the t <= 1 branch is used (both branches agree
    there analytically; pinning one avoids branch-selection jitter).
    """
    if not t > 0.0:
        raise DomainError("f_closed requires t > 0")
    if t <= 1.0 + _BRANCH_GUARD:
        return 0.5 * math.pi * ellip_k_complement(min(t, 1.0))
    ti = 1.0 / t
    return 0.5 * math.pi * ti * ellip_k_complement(ti)


_TAIL_SPLIT = 1e-3      # integrate k in [1 - _TAIL_SPLIT, 1) in the s variable
_TAIL_SMAX = 34.5       # k = 1 - exp(-s); the remainder is ~ s exp(-s) ~ 1e-13


def f_quadrature(t: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Brute-force quadrature of the integral defining f(t).

    The interval is split at k = 1 - 1e-3; on the tail the substitution
    k = 1 - exp(-s) flattens the log singularity of K(k) at k = 1.
    Absolute error <= cfg.rel_tol.  Raises ConvergenceError if the
    refinement budget is exhausted.
    """
    if not t > 0.0:
        raise DomainError("f_quadrature requires t > 0")

    def weight(k):
        return 1.0 / (k + t) + 1.0 / (1.0 + t * k)

    def body(k):
        return weight(k) * ellip_k(k)

    def tail(s):
        e = np.exp(-s)
        k = np.minimum(1.0 - e, 1.0 - 1e-16)
        return body(k) * e

    tol = cfg.rel_tol
    depth = cfg.max_refinements
    try:
        main, _ = gauss_panels(body, 0.0, 1.0 - _TAIL_SPLIT, panels=16,
                               rel_tol=0.0, abs_tol=0.25 * tol,
                               max_refinements=depth)
        rest, _ = gauss_panels(tail, -math.log(_TAIL_SPLIT), _TAIL_SMAX,
                               panels=8, rel_tol=0.0, abs_tol=0.25 * tol,
                               max_refinements=depth)
    except ConvergenceError as exc:
        raise ConvergenceError(f"f_quadrature({t!r}) did not converge") from exc
    return float(main + rest)
