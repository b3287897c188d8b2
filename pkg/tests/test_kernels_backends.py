"""Compiled and pure kernel backends must agree to rounding.

The three primitives (Euler-Maclaurin Hurwitz tail, ascending K-Bessel
series, cosh-kernel quadrature) are implemented twice with the same
floating-point algorithm; these tests pin the two implementations
against each other and check the selection machinery.
"""

import math
import os
import subprocess
import sys

import numpy as np
import pytest

from periodlab import kernels
from periodlab.special_functions import (bernoulli_float, bessel_k,
                                         hurwitz_zeta)

needs_compiled = pytest.mark.skipif(
    "compiled" not in kernels.available_backends(),
    reason="compiled extension not built")


@pytest.fixture(autouse=True)
def restore_backend():
    before = kernels.active_backend()
    yield
    kernels.use_backend(before)


def test_compiled_backend_is_built_and_default():
    assert kernels.available_backends() == ("compiled", "pure")
    assert kernels.active_backend() == "compiled"


def test_use_backend_switches_and_rejects_unknown():
    kernels.use_backend("pure")
    assert kernels.active_backend() == "pure"
    kernels.use_backend("compiled")
    assert kernels.active_backend() == "compiled"
    with pytest.raises(ValueError):
        kernels.use_backend("fortran")


def _both(fn, *args):
    kernels.use_backend("compiled")
    compiled = fn(*args)
    kernels.use_backend("pure")
    pure = fn(*args)
    return compiled, pure


@needs_compiled
def test_hurwitz_em_backends_agree():
    bern = bernoulli_float(8)
    cases = [(2.5, 0.7, 12), (1.5 + 1j, 0.3, 16),
             (3.0 - 0.5j, 2.25, 10), (2.0, 1e-3, 20)]
    for a, x, m0 in cases:
        c, p = _both(kernels.hurwitz_em, a, x, m0, bern)
        assert abs(c - p) <= 1e-13 * max(1.0, abs(p))


@needs_compiled
def test_bessel_series_backends_agree():
    from periodlab.special_functions import gamma
    for nu in (0.3, 0.25 + 0.1j, 2j):
        g0p = 1.0 / gamma(1.0 + nu)
        g0m = 1.0 / gamma(1.0 - nu)
        for x in (0.1, 0.7, 1.9):
            c, p = _both(kernels.bessel_series, nu, x, g0p, g0m, 400)
            assert abs(c - p) <= 1e-13 * max(1e-30, abs(p))


@needs_compiled
def test_bessel_cosh_quad_backends_agree():
    nodes, wts = np.polynomial.legendre.leggauss(24)
    edges = np.linspace(0.0, 12.0, 25)
    for nu in (0.3, 2j, 9.5337j):
        for x in (0.5, 2.0):
            c, p = _both(kernels.bessel_cosh_quad, nu, x, edges, nodes, wts)
            # imaginary order cancels heavily; bound the gap by summation
            # roundoff on the ~600 quadrature terms, not the tiny result
            assert abs(c - p) <= 1e-13 * abs(p) + 1e-14


@needs_compiled
def test_library_results_backend_invariant():
    kernels.use_backend("compiled")
    hz_c = hurwitz_zeta(2.5 + 0.3j, 0.8)
    bk_c = bessel_k(9.5337j, 1.5)
    kernels.use_backend("pure")
    hz_p = hurwitz_zeta(2.5 + 0.3j, 0.8)
    bk_p = bessel_k(9.5337j, 1.5)
    assert abs(hz_c - hz_p) <= 1e-13 * abs(hz_p)
    assert abs(bk_c - bk_p) <= 1e-12 * abs(bk_p)


def test_pure_env_var_forces_fallback():
    env = dict(os.environ, PERIODLAB_PURE="1")
    proc = subprocess.run(
        [sys.executable, "-c",
         "from periodlab import kernels; print(kernels.active_backend())"],
        capture_output=True, text=True, env=env)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "pure"


def test_pure_hurwitz_em_matches_reference():
    # brute-force head plus its own Euler-Maclaurin tail as an
    # independent cross-check of the kernel
    kernels.use_backend("pure")
    bern = bernoulli_float(8)
    a, x = 3.0, 0.6
    val = kernels.hurwitz_em(a, x, 14, bern)
    n_cut = 200_000
    brute = math.fsum((n + x) ** -a for n in range(n_cut))
    brute += (n_cut + x) ** (1 - a) / (a - 1) + 0.5 * (n_cut + x) ** -a
    assert abs(val - brute) <= 1e-12 * abs(val)


def test_pure_bessel_small_order_reference():
    kernels.use_backend("pure")
    x = 0.8
    closed = math.sqrt(math.pi / (2 * x)) * math.exp(-x)
    assert abs(bessel_k(0.5, x) - closed) <= 1e-12 * closed
