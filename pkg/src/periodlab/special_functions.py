"""Scalar special functions: principal branch helpers, complex gamma,
K-Bessel with complex order, Hurwitz zeta, Bernoulli numbers and generalized
binomial coefficients.

All powers in this package are principal: Im log z in (-pi, pi), with the cut
on (-oo, 0].  The K-Bessel evaluator is dual-regime.  For orders with a
sizable imaginary part mu = |Im nu| the function carries the scale
e^(-pi mu/2) while the integrand of

    K_nu(x) = int_0^oo exp(-x cosh t) cosh(nu t) dt

is O(e^-x), so real-axis quadrature loses a factor e^(x - pi mu/2) to
cancellation; the ascending series through I_{+-nu} is well conditioned
exactly there (the 1/Gamma(k+1+nu) factors keep every term at the scale of
the result for x below the turning point).  We therefore use the series for
|Im nu| >= 0.5 and x <= 1.1 |Im nu| + 3, and adaptive panel quadrature
elsewhere.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import kernels
from .errors import BranchCut, ConvergenceFailure, DomainError, Pole, PoleAtOne

__all__ = [
    "log_principal",
    "power",
    "gamma",
    "bessel_k",
    "hurwitz_zeta",
    "bernoulli",
    "bernoulli_float",
    "binom_general",
    "gamma_nu",
]


def log_principal(z: complex) -> complex:
    """Principal logarithm; raises BranchCut on (-oo, 0] (including 0)."""
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0:
        raise BranchCut(f"log argument {z} lies on the cut (-oo, 0]")
    return cmath.log(z)


def power(z: complex, w: complex) -> complex:
    """Principal power z**w = exp(w log z)."""
    return cmath.exp(complex(w) * log_principal(z))


# Lanczos approximation, g = 7, 9 coefficients.
_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma(z: complex) -> complex:
    """Complex gamma function (Lanczos; reflection for Re z < 1/2).

    Raises Pole at non-positive integers.
    """
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == round(z.real):
        raise Pole(f"gamma pole at {z}")
    if z.real < 0.5:
        # Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return math.pi / (cmath.sin(math.pi * z) * gamma(1.0 - z))
    z -= 1.0
    s = _LANCZOS_C[0]
    for i in range(1, 9):
        s += _LANCZOS_C[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * cmath.exp(-t) * s


@lru_cache(maxsize=None)
def bernoulli(k: int) -> Fraction:
    """Exact Bernoulli number B_k with the B_1 = -1/2 convention."""
    if k < 0:
        raise DomainError("Bernoulli index must be non-negative")
    if k == 0:
        return Fraction(1)
    if k == 1:
        return Fraction(-1, 2)
    if k % 2 == 1:
        return Fraction(0)
    # B_k = -1/(k+1) * sum_{j<k} C(k+1, j) B_j
    total = Fraction(0)
    for j in range(k):
        total += Fraction(math.comb(k + 1, j)) * bernoulli(j)
    return -total / (k + 1)


@lru_cache(maxsize=None)
def bernoulli_float(max_j: int) -> np.ndarray:
    """B_2, B_4, ..., B_{2 max_j} as a float vector (for the EM kernels)."""
    return np.array([float(bernoulli(2 * j)) for j in range(1, max_j + 1)])


def binom_general(alpha: complex, k: int) -> complex:
    """Generalized binomial coefficient alpha (alpha-1) ... (alpha-k+1) / k!."""
    if k < 0:
        raise DomainError("binomial lower index must be non-negative")
    out = 1.0 + 0.0j
    for j in range(k):
        out *= (complex(alpha) - j) / (j + 1)
    return out


# ---------------------------------------------------------------------------
# K-Bessel
# ---------------------------------------------------------------------------

_GL_NODES, _GL_WTS = np.polynomial.legendre.leggauss(24)


def _quad_edges(x: float, im_nu: float, refine: int) -> np.ndarray:
    t_end = math.acosh(1.0 + 48.0 / x)
    h = min(0.5, 4.0 / (1.0 + abs(im_nu)), 2.0 / math.sqrt(x + 1.0)) / (1 << refine)
    n = max(2, int(math.ceil(t_end / h)))
    return np.linspace(0.0, t_end, n + 1)


def bessel_k(nu: complex, x: float, *, rtol: float = 1e-12,
             max_refine: int = 3) -> complex:
    """Modified Bessel function K_nu(x) for complex order, x > 0.

    Uses the ascending series in the oscillatory regime (see module
    docstring) and adaptive composite Gauss-Legendre quadrature of the cosh
    integral elsewhere; panel widths shrink with |Im nu| to resolve the
    oscillation of cosh(nu t).  Raises ConvergenceFailure if panel doubling
    does not stabilize.
    """
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"bessel_k requires x > 0, got {x}")
    nu = complex(nu)
    # K is even in nu; canonicalize so K(nu) and K(-nu) are bitwise equal.
    if nu.real < 0.0 or (nu.real == 0.0 and nu.imag < 0.0):
        nu = -nu
    mu = abs(nu.imag)
    if mu >= 0.5 and x <= 1.1 * mu + 3.0:
        g0p = 1.0 / gamma(1.0 + nu)
        g0m = 1.0 / gamma(1.0 - nu)
        return kernels.bessel_series(nu, x, g0p, g0m, 600)
    prev = kernels.bessel_cosh_quad(nu, x, _quad_edges(x, mu, 0), _GL_NODES, _GL_WTS)
    for refine in range(1, max_refine + 1):
        cur = kernels.bessel_cosh_quad(nu, x, _quad_edges(x, mu, refine),
                                       _GL_NODES, _GL_WTS)
        if abs(cur - prev) <= rtol * abs(cur) + 1e-300:
            return cur
        prev = cur
    raise ConvergenceFailure(
        f"bessel_k quadrature did not stabilize at nu={nu}, x={x}")


def bessel_k_bound(t: float) -> float:
    """Crude upper bound for |K_nu(t)| with Re nu = 0, t > 0.

    |K_{i mu}(t)| <= K_0(t) <= sqrt(pi/(2t)) e^(-t) (1 + 1/(8t)) for t
    bounded away from 0; below t = 1/2 we fall back on K_0's logarithmic
    size.  Used only for truncation-tail estimates.
    """
    if t < 0.5:
        return -math.log(t / 2.0) + 1.0
    return math.sqrt(math.pi / (2.0 * t)) * math.exp(-t) * (1.0 + 0.125 / t)


# ---------------------------------------------------------------------------
# Hurwitz zeta
# ---------------------------------------------------------------------------


def _hurwitz_reflection(a: complex, x: float, em_terms: int) -> complex:
    """Hurwitz zeta for real x > 0 and Re a <= -2.5 via the reflection formula.

    With s = 1 - a (so Re s >= 3.5) and x0 = x - m in (0, 1],

        zeta(a, x0) = Gamma(s) (2 pi)^(-s)
                      [e^(-i pi s/2) L(x0, s) + e^(i pi s/2) L(-x0, s)],

    where L(x, s) = sum_{n>=1} e^(2 pi i n x) n^(-s) converges absolutely
    with no cancellation between terms, unlike Euler-Maclaurin whose head
    and boundary terms grow like (m0+x)^(1-Re a) against a small result.
    """
    s = 1.0 - a
    m = int(math.ceil(x)) - 1
    x0 = x - m
    head = 0.0 + 0.0j
    if m > 0:
        pts = np.arange(m) + x0
        head = np.sum(np.exp(-a * np.log(pts.astype(complex))))
    if x0 == 1.0:
        f_plus = f_minus = hurwitz_zeta(s, 1.0, em_terms=em_terms)
    else:
        n_max = int(math.ceil((1e15 * (s.real - 1.0)) ** (1.0 / (s.real - 1.0))))
        n = np.arange(1, max(n_max, 40) + 1)
        powers = np.exp(-s * np.log(n))
        phases = np.exp((2j * math.pi * x0) * n)
        f_plus = np.sum(phases * powers)
        f_minus = np.sum(np.conj(phases) * powers)
    pref = gamma(s) * cmath.exp(-s * math.log(2.0 * math.pi))
    half_turn = 0.5j * math.pi * s
    return pref * (cmath.exp(-half_turn) * f_plus
                   + cmath.exp(half_turn) * f_minus) - head


def hurwitz_zeta(a: complex, x: complex, *, em_terms: int = 14,
                 m0: int | None = None) -> complex:
    """Hurwitz zeta sum_{n>=0} (n+x)^(-a), continued via Euler-Maclaurin.

    Valid for complex a != 1 and x off the cut (-oo, 0].  The head length m0
    grows with |Im a| and with -Re x so the correction series stays safely
    geometric.  For Re a < -0.5 the head is kept short instead: there the
    partial sum and boundary terms grow with m0 while the result does not,
    so rounding error scales up with the head length.  For Re a <= -2.5 and
    real x the reflection formula is used, which has no such cancellation.
    Accuracy is ~1e-13 relative for Re a > -5 and moderate |Im a|, except
    for non-real x with Re a < -2.5 where the short-head Euler-Maclaurin
    floor is a few 1e-10 relative near Re a = -5.
    """
    a = complex(a)
    x = complex(x)
    if a == 1.0:
        raise PoleAtOne("Hurwitz zeta has its pole at a = 1")
    if x.imag == 0.0 and x.real <= 0.0:
        raise BranchCut(f"Hurwitz zeta argument {x} on the cut (-oo, 0]")
    if m0 is None:
        if a.real <= -2.5 and x.imag == 0.0:
            return _hurwitz_reflection(a, x.real, em_terms)
        if a.real < -0.5:
            m0 = int(math.ceil(max(6.0, 0.8 * abs(a.imag), 6.0 - x.real)))
        else:
            m0 = int(math.ceil(max(14.0, 0.8 * abs(a.imag),
                                   1.2 * abs(a) - x.real, 14.0 - x.real)))
    return kernels.hurwitz_em(a, x, m0, bernoulli_float(em_terms))


def gamma_nu(s: complex, nu: complex) -> complex:
    """Archimedean factor (1/(4 pi^s)) Gamma((s-nu)/2) Gamma((s+nu)/2).

    Equals the Mellin transform int_0^oo K_nu(2 pi y) y^s dy/y.
    """
    s = complex(s)
    nu = complex(nu)
    return gamma(0.5 * (s - nu)) * gamma(0.5 * (s + nu)) / \
        (4.0 * cmath.exp(s * math.log(math.pi)))
