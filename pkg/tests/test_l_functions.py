import cmath
import json
import math

import numpy as np
import pytest

from periodlab.errors import (ConvergenceFailure, DomainError, Pole,
                              SlowConvergence)
from periodlab.l_functions import (CompletedLValue, completed_L, dirichlet_L,
                                   dirichlet_L_tail,
                                   functional_equation_residual,
                                   hat_L_quadrature, hat_L_series, mellin_f,
                                   mellin_f_quadrature,
                                   period_evaluator_from_form)
from periodlab.lewis import f_from_form, period_from_boundary
from periodlab.maass_forms import MaassFormData
from periodlab.representations import trivial_representation
from periodlab.special_functions import gamma, gamma_nu

TRIVIAL = trivial_representation()

E1 = np.array([1.0 + 0.0j])


def single_pair_form(N=3, nu=0.8j):
    return MaassFormData(nu, N, 1, {1: E1, -1: E1})


def single_term_form(N=1, nu=0.8j):
    return MaassFormData(nu, N, 1, {1: E1})


@pytest.fixture(scope="module")
def psi_even(even_form):
    return period_evaluator_from_form(even_form, eta=TRIVIAL)


# ---------------------------------------------------------------------------
# Dirichlet series


def test_dirichlet_parity_cancellation():
    form = MaassFormData(0.8j, 2, 1, {1: E1, -1: E1, 3: 2.0 * E1, -3: 2.0 * E1})
    assert np.all(dirichlet_L(form, 2.5, 1) == 0.0)


def test_dirichlet_single_pair():
    form = single_pair_form()
    for s in (2.0, 3.0, 2.5 + 1.2j):
        value = dirichlet_L(form, s, 0)
        assert abs(value[0] - 2.0 * 3.0 ** complex(s)) <= 1e-13 * abs(value[0])
        assert np.all(dirichlet_L(form, s, 1) == 0.0)


def test_dirichlet_domain_and_tail(even_form):
    form = single_pair_form()
    with pytest.raises(DomainError):
        dirichlet_L(form, 1.5, 0)
    with pytest.raises(DomainError):
        dirichlet_L(form, 2.5, 2)
    assert dirichlet_L_tail(form, 1.0) == math.inf
    # once the table reaches past k = N every dropped term has N/k < 1
    # and a larger exponent can only shrink the tail
    assert dirichlet_L_tail(even_form, 3.0) < dirichlet_L_tail(even_form, 2.0)


def test_dirichlet_fixture_truncation_stability(even_form):
    value = dirichlet_L(even_form, 3.0, 0)
    assert np.all(np.isfinite(value))
    # dropping the top ten coefficient pairs moves the sum by less than
    # the tail bound of the shortened table
    short = {k: v for k, v in even_form.coeffs.items()
             if abs(k) <= even_form.K - 10}
    shorter = MaassFormData(even_form.nu, even_form.N, even_form.dim, short)
    moved = np.linalg.norm(value - dirichlet_L(shorter, 3.0, 0))
    assert moved <= dirichlet_L_tail(shorter, 3.0)
    with pytest.raises(SlowConvergence):
        dirichlet_L(even_form, 3.0, 0, tol=1e-16)


# ---------------------------------------------------------------------------
# Completed transforms


def test_hat_L_series_composition():
    form = single_pair_form()
    value = hat_L_series(form, 3.0, 0)
    expected = gamma_nu(3.0, form.nu) * 2.0 * 3.0 ** 3
    assert abs(value[0] - expected) <= 1e-13 * abs(expected)


def test_hat_L_series_pole():
    form = single_pair_form(nu=2.2)
    with pytest.raises(Pole):
        hat_L_series(form, 2.2, 0)


def test_hat_L_quadrature_single_term_identity():
    # one K-Bessel term: the Mellin integral has the Gamma_nu closed form
    form = single_term_form()
    for s in (2.5, 3.0 + 0.7j):
        series = hat_L_series(form, s, 0)
        quad = hat_L_quadrature(form, s, 0, y_min=1e-5, y_max=12.0,
                                fold=False)
        assert np.linalg.norm(series - quad) <= 1e-8 * np.linalg.norm(series)


def test_hat_L_quadrature_window_errors():
    form = single_term_form()
    with pytest.raises(DomainError):
        hat_L_quadrature(form, 2.5, 0, y_min=1.5, y_max=8.0)
    with pytest.raises(DomainError):
        hat_L_quadrature(form, 2.5, 3)


def test_hat_L_fixture_cross_route(even_form, odd_form):
    # the unfolded window shares the truncated table with the series
    # route, so the two agree far below the table's own truncation level
    for form, eps in ((even_form, 0), (odd_form, 1)):
        series = hat_L_series(form, 2.5, eps)
        quad = hat_L_quadrature(form, 2.5, eps, y_min=1e-3, y_max=8.0,
                                fold=False, panel_width=0.2)
        rel = np.linalg.norm(series - quad) / np.linalg.norm(series)
        assert rel <= 1e-7


def test_hat_L_fixture_random_s(even_form):
    rng = np.random.default_rng(7)
    for _ in range(10):
        s = complex(rng.uniform(2.0, 4.0), rng.uniform(-1.5, 1.5))
        series = hat_L_series(even_form, s, 0)
        quad = hat_L_quadrature(even_form, s, 0, y_min=1e-3, y_max=8.0,
                                fold=False, panel_width=0.2, check=False)
        assert (np.linalg.norm(series - quad)
                <= 1e-7 * np.linalg.norm(series) + 1e-22)


def test_hat_L_parity_vanishing(even_form, odd_form):
    # opposite-parity combinations cancel termwise; the quadrature sees
    # roundoff around zero and must not flag it as non-convergence
    assert np.linalg.norm(hat_L_quadrature(even_form, 2.5, 1)) <= 1e-20
    assert np.linalg.norm(hat_L_quadrature(odd_form, 2.5, 0)) <= 1e-20
    assert np.linalg.norm(hat_L_series(even_form, 2.5, 1)) == 0.0
    assert np.linalg.norm(hat_L_series(odd_form, 2.5, 0)) == 0.0


def test_fold_matches_unfold_on_automorphic_window(even_form):
    # folding assumes the reflection u(1/y) = y u(y); inside the window
    # where the truncated table is automorphic the two routes agree
    folded = hat_L_quadrature(even_form, 2.5, 0, y_min=0.125, y_max=8.0,
                              fold=True)
    unfolded = hat_L_quadrature(even_form, 2.5, 0, y_min=0.125, y_max=8.0,
                                fold=False)
    # the folded route replaces the truncated table's spurious mass below
    # y ~ 0.02 by the true reflected tail; the two differ at the level of
    # that junk, far below the value but above machine noise
    diff = np.linalg.norm(folded - unfolded)
    scale = np.linalg.norm(folded)
    assert diff <= 1e-4 * scale


def test_functional_equation_fixture(even_form, odd_form):
    # hat L_eps(s) = (-1)^eps eta(S) hat L_eps(1-s) on the symmetric
    # window; the residual measures the automorphy defect of the table
    for t in (1.0, 2.0):
        res, scale = functional_equation_residual(even_form, 0.5 + 1j * t, 0)
        assert np.linalg.norm(res) <= 1e-6
        assert np.linalg.norm(res) <= 1e-8 * scale
        res, scale = functional_equation_residual(odd_form, 0.5 + 1j * t, 1)
        assert np.linalg.norm(res) <= 1e-6
        assert np.linalg.norm(res) <= 1e-8 * scale
    # at the center s = 1/2 the odd functional equation forces
    # hat L_1(1/2) = -hat L_1(1/2), so the value itself must vanish
    value = hat_L_quadrature(odd_form, 0.5, 1, fold=False)
    assert np.linalg.norm(value) <= 1e-12


def test_functional_equation_flags_bad_table(even_form):
    res0, scale0 = functional_equation_residual(even_form, 0.5 + 1j, 0)
    coeffs = {k: v.copy() for k, v in even_form.coeffs.items()}
    coeffs[5] = coeffs[5] + 1e-3
    coeffs[-5] = coeffs[-5] + 1e-3
    broken = MaassFormData(even_form.nu, even_form.N, even_form.dim, coeffs)
    res1, scale1 = functional_equation_residual(broken, 0.5 + 1j, 0)
    assert (np.linalg.norm(res1) / scale1
            > 1e3 * np.linalg.norm(res0) / scale0)


def test_completed_L_report(even_form):
    for method in ("series", "quadrature"):
        out = completed_L(even_form, 2.5, 0, method=method)
        assert isinstance(out, CompletedLValue)
        assert out.method == method
        assert out.error_estimate >= 0.0
        json.dumps(out.to_report())
    out = completed_L(even_form, 2.5, 0, with_fe=True)
    assert out.fe_residual is not None and out.fe_residual <= 1e-6
    with pytest.raises(DomainError):
        completed_L(even_form, 2.5, 0, method="tarot")


# ---------------------------------------------------------------------------
# Mellin transforms of the boundary function


def test_mellin_single_pair_oracle():
    # v_{+-1} = e1 gives L_0 = 2 N^w, L_1 = 0, so
    # M^{+-} f(s) = +- Gamma(s) (N / 2 pi)^s, the Mellin transform of
    # e^(-2 pi y / N) term by term
    form = single_pair_form()
    for s in (2.5, 3.0 + 1.0j):
        plus = mellin_f(form, s, 1)
        minus = mellin_f(form, s, -1)
        expected = gamma(s) * (form.N / (2.0 * math.pi)) ** complex(s)
        assert abs(plus[0] - expected) <= 1e-12 * abs(expected)
        assert np.linalg.norm(plus + minus) <= 1e-12 * abs(expected)


def test_mellin_sign_and_domain_errors():
    form = single_pair_form()
    with pytest.raises(DomainError):
        mellin_f(form, 2.5, 0)
    with pytest.raises(Pole):
        mellin_f(single_pair_form(nu=0.5), -1.5 + 0.5, -1)
    with pytest.raises(DomainError):
        mellin_f_quadrature(form, -0.5, 1)


def test_mellin_quadrature_single_pair():
    form = single_pair_form()
    for sign in (1, -1):
        series = mellin_f(form, 2.5 + 0.4j, sign)
        quad = mellin_f_quadrature(form, 2.5 + 0.4j, sign)
        assert np.linalg.norm(series - quad) <= 1e-9 * np.linalg.norm(series)


def test_mellin_fixture_cross_check(even_form, odd_form):
    for form in (even_form, odd_form):
        for sign in (1, -1):
            series = mellin_f(form, 2.0 + 0.5j, sign)
            quad = mellin_f_quadrature(form, 2.0 + 0.5j, sign)
            rel = np.linalg.norm(series - quad) / np.linalg.norm(series)
            assert rel <= 1e-7


def test_mellin_holomorphy(even_form):
    # Cauchy-Riemann residual of the two finite-difference derivatives
    # shrinks at second order in h
    s0 = 2.5 + 0.3j

    def cr_residual(h):
        d_re = (mellin_f(even_form, s0 + h, 1)
                - mellin_f(even_form, s0 - h, 1)) / (2.0 * h)
        d_im = (mellin_f(even_form, s0 + 1j * h, 1)
                - mellin_f(even_form, s0 - 1j * h, 1)) / (2j * h)
        return np.linalg.norm(d_re - d_im)

    scale = np.linalg.norm(mellin_f(even_form, s0, 1))
    r1, r2 = cr_residual(1e-2), cr_residual(5e-3)
    assert r1 <= 1e-3 * scale
    assert r2 <= 0.3 * r1


# ---------------------------------------------------------------------------
# Vertical-line period evaluator


def test_period_evaluator_dual_route(even_form, psi_even):
    f = f_from_form(even_form, eta=TRIVIAL)
    psi_b = period_from_boundary(f, even_form.nu, TRIVIAL)
    for z in (2.0 + 0.5j, 2.0 - 0.5j, 0.8 + 0.7j, 1.5 - 0.9j, 0.5 + 1.0j):
        a = psi_even.evaluate(z)
        b = psi_b.evaluate(z)
        assert np.linalg.norm(a - b) <= 1e-8 * np.linalg.norm(b)


def test_period_evaluator_structural_zeros(psi_even):
    # even forms give psi(z) = z^(-2nu-1) psi(1/z); with psi(1) = 0 the
    # three-term equation at z = 1 then forces psi(2) = psi(1/2) = 0,
    # while generic real points stay at the O(1) scale
    generic = max(np.linalg.norm(psi_even.evaluate(x))
                  for x in (0.75, 1.5, 2.5))
    assert generic > 0.1
    for x in (0.5, 1.0, 2.0):
        assert np.linalg.norm(psi_even.evaluate(x)) <= 1e-10 * generic


def test_period_evaluator_one_sided_limits(psi_even):
    # holomorphy across (0, oo): the two one-sided limits at x = 2 agree;
    # the finite-delta gap is the Taylor term 2 delta |psi'(2)| and
    # shrinks linearly
    scale = np.linalg.norm(psi_even.evaluate(2.5))
    gap8 = np.linalg.norm(psi_even.evaluate(2.0 + 1e-8j)
                          - psi_even.evaluate(2.0 - 1e-8j))
    gap9 = np.linalg.norm(psi_even.evaluate(2.0 + 1e-9j)
                          - psi_even.evaluate(2.0 - 1e-9j))
    assert gap8 <= 1e-6 * scale
    assert gap9 <= 0.2 * gap8
    mid = 0.5 * (psi_even.evaluate(2.0 + 1e-8j)
                 + psi_even.evaluate(2.0 - 1e-8j))
    assert np.linalg.norm(mid - psi_even.evaluate(2.0)) <= 1e-10 * scale


def test_period_evaluator_domain_errors(even_form, psi_even):
    with pytest.raises(DomainError):
        psi_even.evaluate(-1.0 + 0.8j)
    with pytest.raises(DomainError):
        psi_even.evaluate(-0.5)
    with pytest.raises(DomainError):
        period_evaluator_from_form(even_form, contour_re=2.0)
    with pytest.raises(DomainError):
        period_evaluator_from_form(even_form, arg_max=1.7)


def test_period_evaluator_metadata(psi_even):
    meta = psi_even.metadata
    assert meta["contour_re"] == 0.5
    assert meta["t_max"] > 2.0 * abs(psi_even.nu.imag)
