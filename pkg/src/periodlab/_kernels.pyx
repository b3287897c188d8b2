# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled numerical kernels.  Keep in lockstep with _kernels_py.py."""

from libc.math cimport cosh, exp, log, sqrt, M_PI

cdef extern from "complex.h":
    double complex cexp(double complex)
    double complex clog(double complex)
    double complex csin(double complex)
    double complex ccosh(double complex)
    double cabs(double complex)

COMPILED = True


def hurwitz_em(double complex a, double complex x, int m0, double[:] bern_even):
    cdef double complex total = 0
    cdef double complex w, logw, term_pow, rising, winv2
    cdef double fact = 1.0
    cdef int n, j, k
    for n in range(m0):
        total += cexp(-a * clog(n + x))
    w = x + m0
    logw = clog(w)
    total += cexp((1.0 - a) * logw) / (a - 1.0)
    total += 0.5 * cexp(-a * logw)
    winv2 = cexp(-2.0 * logw)
    term_pow = cexp((-a - 1.0) * logw)
    rising = a
    k = 1
    for j in range(1, bern_even.shape[0] + 1):
        fact *= (k + 1) * k
        k += 2
        total += (bern_even[j - 1] / fact) * rising * term_pow
        term_pow *= winv2
        rising *= (a + 2 * j - 1) * (a + 2 * j)
    return complex(total)


def bessel_series(double complex nu, double x, double complex g0p,
                  double complex g0m, int max_terms):
    cdef double complex sp = g0p, sm = g0m, tp = g0p, tm = g0m
    cdef double complex half_pow, i_plus, i_minus
    cdef double q = 0.25 * x * x
    cdef int k
    for k in range(1, max_terms + 1):
        tp *= q / (k * (k + nu))
        tm *= q / (k * (k - nu))
        sp += tp
        sm += tm
        if cabs(tp) + cabs(tm) < 1e-20 * (cabs(sp) + cabs(sm)):
            break
    half_pow = cexp(nu * log(0.5 * x))
    i_plus = half_pow * sp
    i_minus = sm / half_pow
    return complex(M_PI / (2.0 * csin(M_PI * nu)) * (i_minus - i_plus))


def bessel_cosh_quad(double complex nu, double x, double[:] edges,
                     double[:] gl_nodes, double[:] gl_wts):
    cdef double complex total = 0
    cdef double lo, half, t
    cdef int i, j
    for i in range(edges.shape[0] - 1):
        lo = edges[i]
        half = 0.5 * (edges[i + 1] - lo)
        for j in range(gl_nodes.shape[0]):
            t = lo + half * (gl_nodes[j] + 1.0)
            total += half * gl_wts[j] * exp(-x * cosh(t)) * ccosh(nu * t)
    return complex(total)
