"""Operator-weighted Hurwitz zetas and expansion coefficients at 0 and infinity.

For a modular-group representation eta whose T-image has order N, the
weighted zeta sums

    zeta_eta(a, x)  = sum_{n>=0} eta(T T'^n)^(-1) (n+x)^(-a),
    zeta'_eta(a, x) = sum_{n>=0} eta(T' T^n)^(-1) (n+x)^(-a),

collapse to N ordinary Hurwitz zetas because the weights repeat with period
N.  Their large-x expansions are Bernoulli-binomial combinations through the
coefficients C(mu, j).  Both feed the expansion of a smooth solution psi of
the three-term functional equation on (0, oo): near 0,

    psi(x) ~ x^(-2 nu - 1) Q_0(1/x) + sum_{l >= -1} C*_l x^l,

and near infinity psi(x) ~ Q_inf(x) + sum_{l >= -1} C*'_l x^(-l - 2 nu - 1),
where the C*-families are finite combinations of the Taylor coefficients of
psi at 1 and the Q-profiles are eta-periodic remainders.  The profiles
vanish identically when psi is the period function of a cusp form, which is
the property q_profile measures.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import (BranchCut, ConvergenceFailure, DomainError, PoleAtOne,
                     RelationViolation, ResonantNu, SlowConvergence)
from .modular_group import MAT_T, MAT_TPRIME
from .representations import Representation, validate_representation
from .special_functions import bernoulli, binom_general, hurwitz_zeta, power

__all__ = [
    "OperatorZetaConfig",
    "AsymptoticCoefficients",
    "zeta_eta",
    "zeta_eta_direct",
    "c_coeff",
    "asymptotic_zeta_eta",
    "taylor_coeffs",
    "c_star",
    "asymptotic_coefficients",
    "q_profile",
    "asymptotic_psi_check",
]

_WEIGHT_CACHE: dict = {}


def _weights(eta: Representation, primed: bool) -> list[np.ndarray]:
    """Inverse weight matrices eta(T T'^j)^(-1) (or eta(T' T^j)^(-1)), j < N.

    Both sequences are N-periodic in j because the T and T' images share
    the order N, so these N matrices cover every term of the defining sums.
    """
    key = (id(eta), primed)
    hit = _WEIGHT_CACHE.get(key)
    if hit is not None and hit[0] is eta:
        return hit[1]
    first = eta.evaluate(MAT_TPRIME if primed else MAT_T)
    step = eta.evaluate(MAT_T if primed else MAT_TPRIME)
    out = []
    current = first
    for _ in range(eta.N):
        out.append(np.linalg.inv(current))
        current = current @ step
    _WEIGHT_CACHE[key] = (eta, out)
    return out


@dataclass(frozen=True)
class OperatorZetaConfig:
    """Weighted Hurwitz zeta setup: representation, exponent, variant.

    primed selects the eta(T' T^n)^(-1) weight family; m0 overrides the
    scalar backend's head length; tolerance is the default target for the
    direct-series route.
    """

    eta: Representation
    a: complex
    primed: bool = False
    m0: int | None = None
    tolerance: float = 1e-10

    def __post_init__(self) -> None:
        report = validate_representation(self.eta)
        if not report["passed"]:
            raise RelationViolation(
                f"representation violates defining relations: {report['deviations']}")

    def weights(self) -> list[np.ndarray]:
        return _weights(self.eta, self.primed)


def _check_off_cut(x: complex) -> complex:
    x = complex(x)
    if x.imag == 0.0 and x.real <= 0.0:
        raise BranchCut(f"argument {x} lies on the cut (-oo, 0]")
    return x


def _zeta_eta_matrix(weights: Sequence[np.ndarray], n_width: int, a: complex,
                     x: complex, m0: int | None = None) -> np.ndarray:
    """N^(-a) sum_j W_j zeta(a, (j+x)/N) without config overhead."""
    front = power(complex(n_width), -a)
    total = np.zeros_like(weights[0])
    for j, w in enumerate(weights):
        total = total + w * hurwitz_zeta(a, (j + x) / n_width, m0=m0)
    return front * total


def zeta_eta(cfg: OperatorZetaConfig, x: complex) -> np.ndarray:
    """Closed N-term form of the weighted zeta as a dim x dim matrix.

    Splitting the defining sum by n mod N turns each residue class into an
    ordinary Hurwitz zeta, giving N^(-a) sum_j eta-weight_j zeta(a, (j+x)/N).
    """
    x = _check_off_cut(x)
    a = complex(cfg.a)
    if a == 1.0:
        raise PoleAtOne("weighted zeta inherits the Hurwitz pole at a = 1")
    return _zeta_eta_matrix(cfg.weights(), cfg.eta.N, a, x, m0=cfg.m0)


def zeta_eta_direct(cfg: OperatorZetaConfig, x: complex,
                    n_max: int = 100_000) -> tuple[np.ndarray, float]:
    """Reference route: explicit partial sum plus a per-class corrected tail.

    The n-sum is taken literally to n_max; beyond it each residue class is a
    shifted zeta tail completed by the first three Euler-Maclaurin terms
    (integral, half-sample, first Bernoulli correction) written out by hand,
    so the route shares no code with the closed form.  Returns the value and
    the norm bound of the first omitted correction.
    """
    x = _check_off_cut(x)
    a = complex(cfg.a)
    if a == 1.0:
        raise PoleAtOne("weighted zeta inherits the Hurwitz pole at a = 1")
    if a.real <= 1.0:
        raise DomainError("direct series needs Re a > 1")
    weights = cfg.weights()
    n_width = cfg.eta.N
    ns = np.arange(n_max + 1, dtype=float)
    terms = np.exp(-a * np.log(ns + x))
    total = np.zeros_like(weights[0])
    err = 0.0
    for j, w in enumerate(weights):
        partial = terms[j::n_width].sum()
        # first index of this class beyond n_max, rescaled to steps of N
        n_next = n_max + 1 + ((j - (n_max + 1)) % n_width)
        c = (n_next + x) / n_width
        tail = (power(c, 1.0 - a) / (a - 1.0) + 0.5 * power(c, -a)
                + (a / 12.0) * power(c, -a - 1.0))
        total = total + w * (partial + power(complex(n_width), -a) * tail)
        omitted = abs(a * (a + 1.0) * (a + 2.0)) / 720.0 * abs(power(c, -a - 3.0))
        err += float(np.linalg.norm(w, 2)) * abs(power(complex(n_width), -a)) * omitted
    return total, err


def c_coeff(mu: int, j: int, a: complex, n_width: int) -> complex:
    """Expansion coefficient C(mu, j) of the weighted zeta at large x.

    Bernoulli-binomial sum over k <= mu with the 0^0 = 1 convention at
    j = 0 (there only the k = mu term survives).
    """
    if mu < 0:
        raise DomainError("expansion order mu must be non-negative")
    a = complex(a)
    total = 0.0 + 0.0j
    for k in range(mu + 1):
        if j == 0:
            if k != mu:
                continue
            jpow = 1.0
        else:
            jpow = float(j) ** (mu - k)
        total += ((-1.0) ** k * float(bernoulli(k))
                  * binom_general(k + a - 2.0, k)
                  * binom_general(1.0 - a - k, mu - k)
                  * float(n_width) ** (k - 1) * jpow)
    return total


def asymptotic_zeta_eta(cfg: OperatorZetaConfig, x: complex,
                        M: int = 4) -> tuple[np.ndarray, float]:
    """Large-x expansion of the weighted zeta through order M.

    Returns (1/(a-1)) sum_{mu<=M} x^(1-a-mu) sum_j W_j C(mu, j) and the norm
    of the first omitted term as the error estimate.  Useful once
    |x| >~ 10 (M + |a|).
    """
    x = _check_off_cut(x)
    a = complex(cfg.a)
    if a == 1.0:
        raise PoleAtOne("expansion front factor 1/(a-1) diverges at a = 1")
    weights = cfg.weights()
    n_width = cfg.eta.N

    def mu_term(mu: int) -> np.ndarray:
        coeff = np.zeros_like(weights[0])
        for j, w in enumerate(weights):
            coeff = coeff + w * c_coeff(mu, j, a, n_width)
        return power(x, 1.0 - a - mu) * coeff

    total = np.zeros_like(weights[0])
    for mu in range(M + 1):
        total = total + mu_term(mu)
    front = 1.0 / (a - 1.0)
    err = abs(front) * float(np.linalg.norm(mu_term(M + 1), 2))
    return front * total, err


def _call_vector(psi: Callable, z: complex) -> np.ndarray:
    return np.atleast_1d(np.asarray(psi(z), dtype=complex))


def taylor_coeffs(psi: Callable, M: int, radius: float = 0.5, *,
                  nodes: int = 64, ctol: float = 1e-9) -> np.ndarray:
    """Taylor coefficients psi^(m)(1)/m! for m <= M via Cauchy integrals.

    Trapezoidal rule on the circle |z-1| = radius, which is spectrally
    accurate for psi holomorphic on the closed disk; radius < 1 keeps the
    circle off the cut (-oo, 0].  The rule is run at the node count and at
    its double; disagreement beyond ctol (relative to the coefficient
    scale) signals a singularity inside the circle and raises.
    Returns an array of shape (M+1, dim).
    """
    if not 0.0 < radius < 1.0:
        raise DomainError("radius must lie in (0, 1) so the circle avoids the cut")
    if M < 0:
        raise DomainError("order M must be non-negative")

    def run(count: int) -> np.ndarray:
        thetas = 2.0 * math.pi * np.arange(count) / count
        ring = 1.0 + radius * np.exp(1j * thetas)
        # nodes at angle 0 or pi pick up a spurious O(eps) imaginary part;
        # snap them onto the axis so evaluators with a dedicated real-axis
        # mode (two-sided boundary averages) recognise them
        near_axis = np.abs(ring.imag) < 1e-12 * radius
        ring = np.where(near_axis, ring.real.astype(complex), ring)
        vals = np.array([_call_vector(psi, z) for z in ring])
        phases = np.exp(-1j * np.outer(np.arange(M + 1), thetas))
        scale = count * radius ** np.arange(M + 1)
        return (phases @ vals) / scale[:, None]

    coarse = run(nodes)
    fine = run(2 * nodes)
    gap = float(np.max(np.abs(fine - coarse)))
    scale = float(np.max(np.abs(fine)))
    if gap > ctol * max(1.0, scale):
        raise ConvergenceFailure(
            f"Cauchy coefficients moved by {gap:.2e} under node doubling; "
            "psi is not resolved as holomorphic on the circle")
    return fine


def c_star(l: int, nu: complex, eta: Representation,
           coeffs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Expansion coefficients (C*_l, C*'_l) from Taylor data at 1.

    C*_l drives the x^l term of psi near 0 and C*'_l the x^(-l-2 nu-1) term
    near infinity.  Each m-summand carries the weighted-zeta expansion
    coefficients C(., j) at the exponent a = m + 2 nu + 1 matching the zeta
    that produced it, with front factor 1/(m + 2 nu) = 1/(a - 1); the primed
    family has an extra binomial resummation from recentering x+1 to x and a
    (-1)^m factor pairing each C_m with the signed argument 1 - 1/(n+x) of
    the expansion at infinity (the elementary solution 1 - z^(-2 nu-1) pins
    the sign: its infinity expansion is the single term -x^(-2 nu-1)).
    Requires Taylor coefficients through order l+1.
    """
    if l < -1:
        raise DomainError("expansion index l starts at -1")
    C = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    if C.shape[0] < l + 2:
        raise DomainError(
            f"need Taylor coefficients through order {l + 1}, got {C.shape[0] - 1}")
    nu = complex(nu)
    n_width = eta.N
    w_plain = _weights(eta, primed=False)
    w_primed = _weights(eta, primed=True)
    dim = C.shape[1]
    plain = np.zeros(dim, dtype=complex)
    primed = np.zeros(dim, dtype=complex)
    for m in range(l + 2):
        denom = m + 2.0 * nu
        if abs(denom) < 1e-13:
            raise ResonantNu(f"m + 2 nu vanishes at m = {m}")
        a_ctx = m + 2.0 * nu + 1.0
        for j in range(n_width):
            wc = w_plain[j] @ C[m]
            plain = plain + (wc / denom) * c_coeff(l + 1 - m, j, a_ctx, n_width)
        for r in range(l + 2 - m):
            cr = (-1.0) ** m * binom_general(r - 2.0 * nu - l - 1.0, r)
            for j in range(n_width):
                wc = w_primed[j] @ C[m]
                primed = primed + (cr / denom) * wc * c_coeff(
                    l + 1 - r - m, j, a_ctx, n_width)
    return plain, primed


@dataclass(frozen=True)
class AsymptoticCoefficients:
    """Taylor data at 1 and the induced expansion coefficients.

    taylor has shape (M+1, dim); c_star maps l to the x^l coefficient at 0
    and c_star_prime maps l to the x^(-l-2 nu-1) coefficient at infinity.
    """

    taylor: np.ndarray
    c_star: dict
    c_star_prime: dict

    def order(self) -> int:
        return max(self.c_star)


def asymptotic_coefficients(psi: Callable, nu: complex, eta: Representation,
                            L: int, *, radius: float = 0.5,
                            nodes: int = 64) -> AsymptoticCoefficients:
    """Taylor coefficients through L+1 and both C*-families for l <= L."""
    C = taylor_coeffs(psi, L + 1, radius, nodes=nodes)
    stars: dict = {}
    stars_prime: dict = {}
    for l in range(-1, L + 1):
        stars[l], stars_prime[l] = c_star(l, nu, eta, C)
    return AsymptoticCoefficients(C, stars, stars_prime)


def q_profile(psi: Callable, eta: Representation, nu: complex, x: float,
              M: int = 4, n_max: int = 400, which: str = "Q0", *,
              taylor: np.ndarray | None = None, nodes: int = 64,
              tol: float | None = None) -> tuple[np.ndarray, float]:
    """Subtraction-scheme remainder Q_0(x) or Q_inf(x) with tail estimate.

    Q_0(x) = x^(-2nu-1) psi(1/x) - sum_m zeta_eta(m+2nu+1, x) C_m
             - sum_{n>=0} (n+x)^(-2nu-1) eta(T T'^n)^(-1)
                          [psi(1 + 1/(n+x)) - sum_m C_m (n+x)^(-m)],

    Q_inf(x) = psi(x) - sum_m (-1)^m zeta'_eta(m+2nu+1, x+1) C_m
             - sum_{n>=1} (n+x)^(-2nu-1) eta(T' T^(n-1))^(-1)
                          [psi(1 - 1/(n+x)) - sum_m C_m (-1/(n+x))^m],

    with m <= M.  The Q_inf subtraction is signed so it matches the Taylor
    expansion of psi at the actual argument 1 - 1/(n+x); the unsigned
    variant defines the same function (the sign flips cancel between the
    zeta counterweight and the n-series) but loses the accelerated tail.
    The value is independent of M; larger M speeds the n-sum convergence,
    whose terms decay like (n+x)^(-sigma-1) with sigma = 2 Re nu + 1 + M.
    The tail estimate is the integral comparison bound
    sum_{n>n_max} <= (n_max+x)^(1-sigma)/(sigma-1) scaled by the last
    computed term norms.  Both profiles vanish identically for period
    functions of cusp forms.
    """
    if which not in ("Q0", "Qinf"):
        raise DomainError(f"which must be Q0 or Qinf, got {which!r}")
    if not x > 0.0:
        raise DomainError("Q-profiles are defined for x > 0")
    nu = complex(nu)
    s = 2.0 * nu + 1.0
    sigma = 2.0 * nu.real + 1.0 + M
    if sigma <= 1.0:
        raise DomainError("need 2 Re nu + M > 0 for a convergent tail bound")
    if taylor is None:
        C = taylor_coeffs(psi, M, nodes=nodes)
    else:
        C = np.atleast_2d(np.asarray(taylor, dtype=complex))
    if C.shape[0] < M + 1:
        raise DomainError(f"need Taylor coefficients through order {M}")
    n_width = eta.N
    primed = which == "Qinf"
    weights = _weights(eta, primed=primed)

    if primed:
        head = _call_vector(psi, x)
        shift = x + 1.0
        n_start = 1
        sign = -1.0
    else:
        head = power(x, -s) * _call_vector(psi, 1.0 / x)
        shift = complex(x)
        n_start = 0
        sign = 1.0

    zsub = np.zeros_like(head)
    for m in range(M + 1):
        a_m = m + 2.0 * nu + 1.0
        if abs(a_m - 1.0) < 1e-13:
            raise ResonantNu(f"m + 2 nu vanishes at m = {m}")
        zsub = zsub + sign ** m * (
            _zeta_eta_matrix(weights, n_width, a_m, shift) @ C[m])

    series = np.zeros_like(head)
    recent: list[float] = []
    powers = np.arange(M + 1)
    for n in range(n_start, n_start + n_max + 1):
        base = n + x
        u = 1.0 / base
        bracket = _call_vector(psi, 1.0 + sign * u)
        bracket = bracket - ((sign * u) ** powers) @ C
        w = weights[(n - n_start) % n_width]
        term = power(base, -s) * (w @ bracket)
        series = series + term
        recent.append(float(np.linalg.norm(term)))
        if len(recent) > 5:
            recent.pop(0)
    tail = max(recent) * (n_max + x) / (sigma - 1.0) if recent else 0.0
    if tol is not None and tail > tol:
        raise SlowConvergence(
            f"tail estimate {tail:.2e} exceeds tolerance {tol:.2e}; "
            "raise n_max or M")
    return head - zsub - series, tail


def asymptotic_psi_check(psi: Callable, coeffs: AsymptoticCoefficients,
                         nu: complex, side: str = "zero",
                         samples: Sequence[float] = (0.2, 0.1, 0.05)) -> dict:
    """Compare psi against its truncated expansion and fit the error slope.

    side "zero" uses sum_{l<=L} C*_l x^l, side "infinity" uses
    sum_{l<=L} C*'_l x^(-l-2 nu-1).  A correct coefficient family makes the
    error scale like the first omitted power, so the fitted log-log slope
    must land within 0.3 of L+1 (or its mirror at infinity).  Assumes the
    matching Q-profile has been checked to vanish.  Returns a JSON-ready
    report with per-sample errors, the fitted and expected slopes, and the
    verdict.
    """
    if side not in ("zero", "infinity"):
        raise DomainError(f"side must be zero or infinity, got {side!r}")
    nu = complex(nu)
    table = coeffs.c_star if side == "zero" else coeffs.c_star_prime
    L = max(table)
    rows = []
    for x in samples:
        if not x > 0.0:
            raise DomainError("samples must be positive reals")
        model = np.zeros_like(next(iter(table.values())))
        for l, vec in table.items():
            expo = l if side == "zero" else -(l + 2.0 * nu + 1.0)
            model = model + vec * power(x, expo)
        value = _call_vector(psi, x)
        rows.append({
            "x": float(x),
            "error": float(np.linalg.norm(value - model)),
            "psi_norm": float(np.linalg.norm(value)),
            "model_norm": float(np.linalg.norm(model)),
        })
    if side == "zero":
        expected = float(L + 1)
    else:
        expected = -float(L + 2 + 2.0 * nu.real)
    scale = max(row["psi_norm"] for row in rows)
    exact = all(row["error"] <= 1e-13 * max(1.0, scale) for row in rows)
    if exact:
        slope = None
        passed = True
    else:
        xs = np.log([row["x"] for row in rows])
        errs = np.log([max(row["error"], 1e-300) for row in rows])
        slope = float(np.polyfit(xs, errs, 1)[0])
        passed = abs(slope - expected) <= 0.3
    return {
        "side": side,
        "order": int(L),
        "samples": rows,
        "fitted_slope": slope,
        "expected_slope": expected,
        "exact": exact,
        "passed": bool(passed),
    }
