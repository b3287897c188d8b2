"""Pure-Python (numpy) twin of the compiled kernels in ``_kernels.pyx``.

Both backends implement the same three primitives with identical call
signatures and the same floating-point algorithms, so results agree to
rounding.  Selection happens in :mod:`periodlab.kernels`.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

COMPILED = False


def hurwitz_em(a: complex, x: complex, m0: int, bern_even) -> complex:
    """Euler-Maclaurin evaluation of sum_{n>=0} (n+x)^(-a).

    ``bern_even`` holds B_2, B_4, ... as floats; the caller chooses ``m0``
    (head length) large enough that the correction series converges.
    """
    a = complex(a)
    x = complex(x)
    n = np.arange(m0)
    head = np.exp(-a * np.log(n + x)).sum() if m0 > 0 else 0.0
    w = x + m0
    logw = cmath.log(w)
    total = head + cmath.exp((1.0 - a) * logw) / (a - 1.0)
    total += 0.5 * cmath.exp(-a * logw)
    # Correction terms B_2j/(2j)! * a(a+1)...(a+2j-2) * w^(-a-2j+1).
    winv2 = cmath.exp(-2.0 * logw)
    term_pow = cmath.exp((-a - 1.0) * logw)
    rising = a
    fact = 1.0
    k = 1
    for j, b2j in enumerate(bern_even, start=1):
        fact *= (k + 1) * k  # (2j)! built incrementally
        k += 2
        total += (b2j / fact) * rising * term_pow
        term_pow *= winv2
        rising *= (a + 2 * j - 1) * (a + 2 * j)
    return complex(total)


def bessel_series(nu: complex, x: float, g0p: complex, g0m: complex,
                  max_terms: int) -> complex:
    """Ascending series for K_nu(x) via I_{+-nu}.

    ``g0p`` and ``g0m`` are 1/Gamma(1+nu) and 1/Gamma(1-nu); the recurrence
    g_k = g_{k-1}/(k (k +- nu)) keeps all Gamma ratios incremental.
    """
    nu = complex(nu)
    q = 0.25 * x * x
    sp = g0p
    sm = g0m
    tp = g0p
    tm = g0m
    for k in range(1, max_terms + 1):
        tp *= q / (k * (k + nu))
        tm *= q / (k * (k - nu))
        sp += tp
        sm += tm
        if abs(tp) + abs(tm) < 1e-20 * (abs(sp) + abs(sm)):
            break
    half_pow = cmath.exp(nu * math.log(0.5 * x))
    i_plus = half_pow * sp
    i_minus = sm / half_pow
    return complex(math.pi / (2.0 * cmath.sin(math.pi * nu)) * (i_minus - i_plus))


def bessel_cosh_quad(nu: complex, x: float, edges, gl_nodes, gl_wts) -> complex:
    """Composite Gauss-Legendre quadrature of int_0^T exp(-x cosh t) cosh(nu t)."""
    edges = np.asarray(edges, dtype=float)
    lo = edges[:-1]
    half = 0.5 * (edges[1:] - lo)
    # nodes: panels x gl, flattened
    t = (lo[:, None] + half[:, None] * (np.asarray(gl_nodes)[None, :] + 1.0)).ravel()
    w = (half[:, None] * np.asarray(gl_wts)[None, :]).ravel()
    vals = np.exp(-x * np.cosh(t)) * np.cosh(complex(nu) * t)
    return complex(np.dot(w, vals))
