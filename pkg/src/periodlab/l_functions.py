"""Dirichlet series, completed transforms, and Mellin machinery for forms.

A coefficient table v_k defines two Dirichlet series

    L_eps(s) = sum_{k != 0} sign(k)^eps (N/|k|)^s v_k,   eps = 0, 1,

convergent for Re s > 1 when the v_k are bounded.  Their completions

    hat L_0(s) = Gamma_nu(s) L_0(s),    hat L_1(s) = Gamma_nu(s+1) L_1(s)

equal Mellin transforms of the boundary profiles u_0, u_1 of the form,
extend to entire functions, and satisfy

    hat L_eps(s) = (-1)^eps eta(S) hat L_eps(1 - s).

The same transforms give the Mellin transforms of the boundary function
f attached to the form and, by Mellin inversion, a vertical-line integral
representation of the period function psi.  That representation converges
for |arg z| < pi/2 and is uniformly accurate down to (and on) the
positive real axis, where the Fourier series route is useless; it is the
evaluator of choice for residual checks on grids touching (0, oo).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import (ConvergenceFailure, DomainError, Pole, SlowConvergence)
from .lewis import PeriodEvaluator
from .maass_forms import MaassFormData, u_profile
from .modular_group import MAT_S
from .special_functions import bessel_k_bound, gamma, gamma_nu, log_principal

__all__ = [
    "CompletedLValue",
    "dirichlet_L",
    "dirichlet_L_tail",
    "hat_L_series",
    "hat_L_quadrature",
    "functional_equation_residual",
    "completed_L",
    "mellin_f",
    "mellin_f_quadrature",
    "period_evaluator_from_form",
]

_GL_NODES, _GL_WTS = leggauss(24)


@dataclass(frozen=True)
class CompletedLValue:
    """One completed-transform evaluation with its provenance."""

    s: complex
    eps: int
    value: np.ndarray
    method: str
    error_estimate: float = 0.0
    fe_residual: float | None = None

    def to_report(self) -> dict:
        return {
            "s": [self.s.real, self.s.imag],
            "eps": self.eps,
            "value": [[v.real, v.imag] for v in self.value],
            "method": self.method,
            "error_estimate": self.error_estimate,
            "fe_residual": self.fe_residual,
        }


def _rho_S(eta, dim: int) -> np.ndarray:
    if eta is None:
        return np.eye(dim, dtype=complex)
    return eta.evaluate(MAT_S)


def _signed_pairs(form: MaassFormData, eps: int):
    """Positive k with the parity combination v_k + (-1)^eps v_{-k}."""
    zero = np.zeros(form.dim, dtype=complex)
    sign = 1.0 if eps == 0 else -1.0
    for k in range(1, form.K + 1):
        vp = form.coeffs.get(k, zero)
        vm = form.coeffs.get(-k, zero)
        combo = vp + sign * vm
        if np.any(combo != 0.0):
            yield k, combo


def dirichlet_L_tail(form: MaassFormData, sigma: float) -> float:
    """Bound on the dropped |k| > K part of L_eps at Re s = sigma."""
    if sigma <= 1.0:
        return math.inf
    bound = form.coefficient_bound()
    k_top = form.K
    return (2.0 * bound * form.N ** sigma
            * k_top ** (1.0 - sigma) / (sigma - 1.0))


def dirichlet_L(form: MaassFormData, s: complex, eps: int, *,
                tol: float | None = None) -> np.ndarray:
    """Truncated L_eps(s) = sum_{k != 0} sign(k)^eps (N/|k|)^s v_k.

    Raises SlowConvergence when a tolerance is supplied and the tail
    bound from coefficient boundedness exceeds it.
    """
    s = complex(s)
    if eps not in (0, 1):
        raise DomainError("eps selects the even (0) or odd (1) series")
    if s.real < 2.0:
        raise DomainError(
            f"raw summation needs Re s >= 2, got {s.real}; "
            "use the completed-transform quadrature route below that")
    if tol is not None and dirichlet_L_tail(form, s.real) > tol:
        raise SlowConvergence(
            f"L tail bound {dirichlet_L_tail(form, s.real):.3e} exceeds "
            f"{tol:.3e} at Re s = {s.real}")
    total = np.zeros(form.dim, dtype=complex)
    for k, combo in _signed_pairs(form, eps):
        total = total + (form.N / k) ** s * combo
    return total


def hat_L_series(form: MaassFormData, s: complex, eps: int, *,
                 tol: float | None = None) -> np.ndarray:
    """hat L_0 = Gamma_nu(s) L_0(s), hat L_1 = Gamma_nu(s+1) L_1(s)."""
    s = complex(s)
    factor = gamma_nu(s + eps, form.nu)
    return factor * dirichlet_L(form, s, eps, tol=tol)


def _log_grid(y_lo: float, y_hi: float, panel_width: float,
              nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes/weights for integrals F(y) dy/y on [y_lo, y_hi]."""
    if nodes == _GL_NODES.size:
        xs, ws = _GL_NODES, _GL_WTS
    else:
        xs, ws = leggauss(nodes)
    g_lo, g_hi = math.log(y_lo), math.log(y_hi)
    n_panels = max(1, int(math.ceil((g_hi - g_lo) / panel_width)))
    edges = np.linspace(g_lo, g_hi, n_panels + 1)
    g_nodes, g_wts = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        half = 0.5 * (b - a)
        g_nodes.append(0.5 * (a + b) + half * xs)
        g_wts.append(half * ws)
    return np.exp(np.concatenate(g_nodes)), np.concatenate(g_wts)


_PROFILE_CACHE: dict = {}


def _profiles_on_grid(form: MaassFormData, eps: int, y_lo: float,
                      y_hi: float, panel_width: float,
                      nodes: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    key = (id(form), eps, y_lo, y_hi, panel_width, nodes)
    hit = _PROFILE_CACHE.get(key)
    if hit is not None and hit[0] is form:
        return hit[1]
    ys, wts = _log_grid(y_lo, y_hi, panel_width, nodes)
    values = np.empty((ys.size, form.dim), dtype=complex)
    for i, y in enumerate(ys):
        values[i] = u_profile(form, float(y), eps)
    # the strong form reference keeps id(form) from being recycled
    _PROFILE_CACHE[key] = (form, (ys, wts, values))
    return ys, wts, values


def _envelope_scale(form: MaassFormData, eps: int, ys: np.ndarray,
                    wts: np.ndarray, exponent: float) -> float:
    """Crude absolute bound on the profile Mellin integral.

    Uses ||v_k|| <= B and the K-Bessel envelope; identifies integrals
    that are numerically zero (parity-cancelling data) so the stability
    check does not trip on pure roundoff.
    """
    bound = form.coefficient_bound()
    total = 0.0
    for y, w in zip(ys, wts):
        env = 0.0
        for k in range(1, form.K + 1):
            x = 2.0 * math.pi * k * float(y) / form.N
            if x > 60.0:
                break
            term = bessel_k_bound(x)
            if eps == 1:
                term *= k * float(y) / form.N
            env += term
        total += abs(w) * env * float(y) ** exponent
    return bound * total


def _quadrature_once(form: MaassFormData, s: complex, eps: int,
                     y_min: float, y_max: float, eta, fold: bool,
                     panel_width: float, nodes: int) -> np.ndarray:
    if fold:
        y_top = max(y_max, 1.0 / y_min)
        ys, wts, values = _profiles_on_grid(form, eps, 1.0, y_top,
                                            panel_width, nodes)
        log_y = np.log(ys)
        direct = (wts * np.exp(s * log_y)) @ values
        reflected = (wts * np.exp((1.0 - s) * log_y)) @ values
        rho = _rho_S(eta, form.dim)
        sign = 1.0 if eps == 0 else -1.0
        return direct + sign * (rho @ reflected)
    ys, wts, values = _profiles_on_grid(form, eps, y_min, y_max,
                                        panel_width, nodes)
    return (wts * np.exp(s * np.log(ys))) @ values


def hat_L_quadrature(form: MaassFormData, s: complex, eps: int,
                     y_min: float = 0.125, y_max: float = 8.0, *,
                     eta=None, fold: bool = True,
                     panel_width: float = 0.15, nodes: int = 24,
                     check: bool = True, rtol: float = 1e-8) -> np.ndarray:
    """hat L_eps(s) as the Mellin integral of the boundary profile u_eps.

    With fold=True the small-y half is folded onto [1, 1/y_min] through
    the reflection u_eps(1/y) = (-1)^eps y eta(S) u_eps(y), which avoids
    K-Bessel sums at tiny arguments; this assumes the data is genuinely
    automorphic.  fold=False integrates u_eps over [y_min, y_max] as
    given, which is the honest route for functional-equation residuals.
    """
    s = complex(s)
    if eps not in (0, 1):
        raise DomainError("eps selects the even (0) or odd (1) profile")
    if not (y_min < 1.0 < y_max):
        raise DomainError("need y_min < 1 < y_max")
    value = _quadrature_once(form, s, eps, y_min, y_max, eta, fold,
                             panel_width, nodes)
    if check:
        finer = _quadrature_once(form, s, eps, y_min, y_max, eta, fold,
                                 0.5 * panel_width, nodes)
        scale = max(np.linalg.norm(value), np.linalg.norm(finer))
        if np.linalg.norm(value - finer) > rtol * scale:
            y_lo = 1.0 if fold else y_min
            y_hi = max(y_max, 1.0 / y_min) if fold else y_max
            ys, wts = _log_grid(y_lo, y_hi, panel_width, nodes)
            exponent = max(s.real, 1.0 - s.real) if fold else s.real
            floor = 1e-12 * _envelope_scale(form, eps, ys, wts, exponent)
            if scale > floor:
                raise ConvergenceFailure(
                    f"quadrature unstable at s={s}: panel halving moved "
                    f"the value by {np.linalg.norm(value - finer):.3e} "
                    f"(scale {scale:.3e})")
            # parity-cancelling data: the integral is roundoff around zero
        value = finer
    return value


def functional_equation_residual(form: MaassFormData, s: complex, eps: int, *,
                                 eta=None, y_min: float = 0.125,
                                 y_max: float = 8.0,
                                 panel_width: float = 0.15,
                                 nodes: int = 24) -> tuple[np.ndarray, float]:
    """hat L_eps(s) - (-1)^eps eta(S) hat L_eps(1-s) via unfolded quadrature.

    Both sides integrate u_eps over the same y-window, so for exactly
    automorphic data on a reflection-symmetric window (y_max = 1/y_min)
    the residual vanishes identically; what remains measures the
    automorphy defect of the coefficient table.  Returns the residual
    and the scale max(||hat L(s)||, ||hat L(1-s)||).
    """
    s = complex(s)
    left = hat_L_quadrature(form, s, eps, y_min, y_max, eta=eta,
                            fold=False, panel_width=panel_width, nodes=nodes)
    right = hat_L_quadrature(form, 1.0 - s, eps, y_min, y_max, eta=eta,
                             fold=False, panel_width=panel_width, nodes=nodes)
    rho = _rho_S(eta, form.dim)
    sign = 1.0 if eps == 0 else -1.0
    residual = left - sign * (rho @ right)
    scale = max(np.linalg.norm(left), np.linalg.norm(right))
    return residual, float(scale)


def completed_L(form: MaassFormData, s: complex, eps: int, *,
                method: str = "quadrature", eta=None,
                with_fe: bool = False, **kwargs) -> CompletedLValue:
    """hat L_eps(s) bundled with an error estimate and optional FE residual."""
    s = complex(s)
    if method == "series":
        value = hat_L_series(form, s, eps, **kwargs)
        est = (abs(gamma_nu(s + eps, form.nu))
               * dirichlet_L_tail(form, s.real))
    elif method == "quadrature":
        value = hat_L_quadrature(form, s, eps, eta=eta, **kwargs)
        est = float(np.linalg.norm(value)) * 1e-8 + form.est_accuracy
    else:
        raise DomainError(f"unknown method {method!r}")
    fe = None
    if with_fe:
        residual, scale = functional_equation_residual(form, s, eps, eta=eta)
        fe = float(np.linalg.norm(residual))
    return CompletedLValue(s=s, eps=eps, value=np.asarray(value),
                           method=method, error_estimate=float(est),
                           fe_residual=fe)


# ---------------------------------------------------------------------------
# Mellin transforms of the boundary function f


def mellin_f(form: MaassFormData, s: complex, sign: int, *,
             tol: float | None = None) -> np.ndarray:
    """M^{+-} f(s) = +- (Gamma(s) N^nu / (2 (2 pi)^s)) (L_0 +- L_1)(s - nu).

    The series route needs Re(s - nu) >= 2; Gamma poles raise Pole.
    """
    s = complex(s)
    if sign not in (1, -1):
        raise DomainError("sign selects the upper (+1) or lower (-1) Mellin")
    nu = form.nu
    front = (gamma(s) * cmath.exp(nu * math.log(form.N))
             / (2.0 * (2.0 * math.pi) ** s))
    l0 = dirichlet_L(form, s - nu, 0, tol=tol)
    l1 = dirichlet_L(form, s - nu, 1, tol=tol)
    return sign * front * (l0 + sign * l1)


def mellin_f_quadrature(form: MaassFormData, s: complex, sign: int, *,
                        y_min: float = 1e-5, y_max: float | None = None,
                        panel_width: float = 0.2,
                        nodes: int = 24) -> np.ndarray:
    """int_0^oo y^s f(sign i y) dy/y for the truncated Fourier data.

    Integrates the same finite coefficient table the series route sums,
    so the two routes agree to quadrature accuracy; the truncation tail
    of the underlying L-series is dirichlet_L_tail's business.
    """
    s = complex(s)
    if sign not in (1, -1):
        raise DomainError("sign selects the upper (+1) or lower (-1) Mellin")
    if s.real <= 0.0:
        raise DomainError("Mellin quadrature needs Re s > 0 at y -> 0")
    if y_max is None:
        y_max = max(8.0, 7.0 * form.N)
    nu = form.nu
    zero = np.zeros(form.dim, dtype=complex)
    ks, vecs = [], []
    for k in range(1, form.K + 1):
        vec = form.coeffs.get(k if sign == 1 else -k, zero)
        if np.any(vec != 0.0):
            ks.append(k)
            vecs.append(vec)
    if not ks:
        return zero
    k_arr = np.array(ks, dtype=float)
    weights = np.exp(nu * np.log(k_arr))
    table = weights[:, None] * np.array(vecs)
    ys, wts = _log_grid(y_min, y_max, panel_width, nodes)
    decay = np.exp(-2.0 * math.pi / form.N * np.outer(ys, k_arr))
    f_vals = decay @ table
    value = (wts * np.exp(s * np.log(ys))) @ f_vals
    return float(sign) * value


# ---------------------------------------------------------------------------
# Vertical-line integral representation of the period function


def period_evaluator_from_form(form: MaassFormData, *, eta=None,
                               contour_re: float = 0.5,
                               arg_max: float = 1.30, slack: float = 18.0,
                               t_panel: float = 0.75, nodes: int = 24,
                               y_top: float = 8.0, y_panel: float = 0.15
                               ) -> PeriodEvaluator:
    """Period evaluator from the contour integral against hat L_0, hat L_1.

    psi(z) = (1/2 pi) int_{-T}^{T} z^{-(c+it)} G(c+it) dt with

        G(s) = N^nu sin(pi (nu + 1/2)) [ i pi^(-nu-3/2) Gamma((s+1)/2)
               Gamma((2nu+2-s)/2) hat L_0(s - nu)
               + pi^(-nu-1/2) Gamma(s/2) Gamma((2nu+1-s)/2)
               hat L_1(s - nu) ],

    valid on 0 < c < 2 Re nu + 1.  The integrand decays like
    exp(-(pi/2 - |arg z|) |t|) beyond the gamma plateau |t| <= 2 |Im nu|,
    so T is sized from the largest |arg z| the evaluator must serve;
    points with |arg z| > arg_max raise DomainError rather than return
    silently truncated values.  G is precomputed on the contour nodes
    (the costly K-Bessel profile work is done once), after which each
    psi(z) is a weighted dot product.
    """
    nu = complex(form.nu)
    c = float(contour_re)
    if not (0.0 < c < 2.0 * nu.real + 1.0):
        raise DomainError(
            f"contour needs 0 < c < 2 Re nu + 1 = {2*nu.real+1}, got {c}")
    if not (0.0 < arg_max < 0.5 * math.pi):
        raise DomainError("arg_max must lie in (0, pi/2)")

    t_max = 2.0 * abs(nu.imag) + slack / (0.5 * math.pi - arg_max)
    n_panels = max(1, int(math.ceil(2.0 * t_max / t_panel)))
    edges = np.linspace(-t_max, t_max, n_panels + 1)
    if nodes == _GL_NODES.size:
        xs, gl_w = _GL_NODES, _GL_WTS
    else:
        xs, gl_w = leggauss(nodes)
    t_nodes, t_wts = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        half = 0.5 * (b - a)
        t_nodes.append(0.5 * (a + b) + half * xs)
        t_wts.append(half * gl_w)
    t_nodes = np.concatenate(t_nodes)
    t_wts = np.concatenate(t_wts)
    s_nodes = c + 1j * t_nodes

    # folded Mellin integrals of both profiles at every contour node
    rho = _rho_S(eta, form.dim)
    w_nodes = s_nodes - nu
    hats = []
    for eps in (0, 1):
        ys, wts, values = _profiles_on_grid(form, eps, 1.0, y_top,
                                            y_panel, nodes)
        log_y = np.log(ys)
        weighted = wts[:, None] * values
        direct = np.exp(np.outer(w_nodes, log_y)) @ weighted
        reflected = (np.exp(np.outer(1.0 - w_nodes, log_y))
                     @ (weighted @ rho.T))
        sign = 1.0 if eps == 0 else -1.0
        hats.append(direct + sign * reflected)
    hat0, hat1 = hats

    sin_front = cmath.sin(math.pi * (nu + 0.5))
    n_pow = cmath.exp(nu * math.log(form.N))
    pi_a = math.pi ** (-nu - 1.5)
    pi_b = math.pi ** (-nu - 0.5)
    g0 = np.array([gamma(0.5 * (s + 1.0)) * gamma(0.5 * (2.0 * nu + 2.0 - s))
                   for s in s_nodes])
    g1 = np.array([gamma(0.5 * s) * gamma(0.5 * (2.0 * nu + 1.0 - s))
                   for s in s_nodes])
    g_table = (n_pow * sin_front
               * (1j * pi_a * (g0[:, None] * hat0)
                  + pi_b * (g1[:, None] * hat1)))
    weighted_g = t_wts[:, None] * g_table / (2.0 * math.pi)

    def evaluator(z: complex) -> np.ndarray:
        z = complex(z)
        if z == 0.0 or (z.imag == 0.0 and z.real <= 0.0):
            raise DomainError(f"period evaluation point {z} is on the cut")
        if abs(cmath.phase(z)) > arg_max:
            raise DomainError(
                f"|arg z| = {abs(cmath.phase(z)):.4f} exceeds the contour "
                f"design bound {arg_max}; rebuild with a larger arg_max")
        powers = np.exp(-s_nodes * log_principal(z))
        return powers @ weighted_g

    meta = {"t_max": t_max, "t_nodes": int(t_nodes.size), "y_top": y_top,
            "contour_re": c, "arg_max": arg_max, "source": form.source}
    return PeriodEvaluator(evaluator=evaluator, nu=nu, eta=eta,
                           metadata=meta)
