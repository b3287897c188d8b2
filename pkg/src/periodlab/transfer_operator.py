"""Slash action, transfer operators, and semigroup continuation.

The monoid generated by T = [[1,1],[0,1]] and T' = [[1,0],[1,1]] consists
of nonnegative matrices; the weight-(nu, eta) slash action

    (psi |_(nu,eta) gamma)(z) = (c z + d)^(-2 nu - 1) eta(gamma)^(-1)
                                psi(gamma z)

is a right action on it.  Summing the slash images over the level sets
T (T')^n and T' T^n yields the two transfer operators

    L_0 psi(x)   = x^(-2nu-1) sum_(n>=0) (n + 1/x)^(-2nu-1)
                   eta(T (T')^n)^(-1) psi(1 + 1/(n + 1/x)),
    L_inf psi(x) = sum_(n>=1) (n + x)^(-2nu-1) eta(T' T^n)^(-1)
                   psi(1 - 1/(n + x)),

whose fixed points on (0, oo) are the period functions with vanishing
profile on the matching side.  Truncated sums are completed with a
resummed tail: the Taylor expansion of psi at 1 turns the tail into
weighted Hurwitz zetas with closed forms, improving raw truncation by
several digits and giving an error estimate from the first omitted
Taylor order.  continue_psi sums slash images over all words of a fixed
length, which reproduces psi on (0, oo) for Lewis solutions and extends
it holomorphically off the axis.
"""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import (BranchCut, DomainError, ResonantNu, SizeLimit,
                     SlowConvergence)
from .modular_group import MAT_T, MAT_TPRIME, ProjectiveMatrix, mobius_apply
from .representations import Representation
from .special_functions import hurwitz_zeta, power
from .zeta_asymptotics import _weights, taylor_coeffs

_LETTERS = {"T": MAT_T, "T'": MAT_TPRIME}
_MAX_WORD_LENGTH = 22


@dataclass(frozen=True)
class SemigroupWord:
    """Word over the letters {T, T'} with its cached matrix product.

    Products of T and T' have nonnegative entries, which is checked on
    construction along with the product itself.
    """

    letters: tuple
    matrix: ProjectiveMatrix = field(default=None)

    def __post_init__(self) -> None:
        letters = tuple(self.letters)
        object.__setattr__(self, "letters", letters)
        product = ProjectiveMatrix.identity()
        for letter in letters:
            if letter not in _LETTERS:
                raise DomainError(f"letter {letter!r} is not T or T'")
            product = product * _LETTERS[letter]
        if self.matrix is None:
            object.__setattr__(self, "matrix", product)
        elif self.matrix != product:
            raise DomainError("cached matrix does not match the letter product")
        m = self.matrix
        if min(m.a, m.b, m.c, m.d) < 0:
            raise DomainError("semigroup matrices must have nonnegative entries")

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "SemigroupWord") -> "SemigroupWord":
        return SemigroupWord(self.letters + other.letters,
                             self.matrix * other.matrix)

    def to_string(self) -> str:
        return "".join(self.letters) if self.letters else "1"


def enumerate_Qn(n: int) -> list:
    """All 2^n words of length n, in binary order with T before T'."""
    if n < 0:
        raise DomainError("word length must be non-negative")
    if n > _MAX_WORD_LENGTH:
        raise SizeLimit(f"2^{n} words exceed the enumeration guard "
                        f"(length {_MAX_WORD_LENGTH})")
    return [SemigroupWord(letters)
            for letters in itertools.product(("T", "T'"), repeat=n)]


def slash(psi: Callable, gamma: ProjectiveMatrix, nu: complex,
          eta: Representation, z: complex) -> np.ndarray:
    """(psi | gamma)(z) = (cz+d)^(-2nu-1) eta(gamma)^(-1) psi(gamma z).

    The power takes the principal branch of the stored matrix
    representative; on the nonnegative semigroup and Re z > 0 the
    denominator stays in the right half plane, where the cocycle rule
    holds and slash composes as a right action.
    """
    z = complex(z)
    denom = gamma.c * z + gamma.d
    factor = power(denom, -2.0 * nu - 1.0)
    w = (gamma.a * z + gamma.b) / denom
    inv_rho = np.linalg.inv(eta.evaluate(gamma))
    value = np.atleast_1d(np.asarray(psi(w), dtype=complex))
    return factor * (inv_rho @ value)


def _taylor_rows(psi: Callable, taylor, order: int, nodes: int) -> np.ndarray:
    if taylor is None:
        return taylor_coeffs(psi, order, nodes=nodes)
    taylor = np.asarray(taylor, dtype=complex)
    if taylor.ndim == 1:
        taylor = taylor.reshape(-1, 1)
    if taylor.shape[0] < order + 1:
        raise DomainError(f"need Taylor rows through order {order}, "
                          f"got {taylor.shape[0]}")
    return taylor


def _tail_zeta(weights: Sequence[np.ndarray], a: complex, shift: float,
               n_start: int, class_offset: int) -> np.ndarray:
    """sum_(n >= n_start) (n + shift)^(-a) W[(n - class_offset) mod N]
    via one Hurwitz zeta per residue class."""
    n_width = len(weights)
    if abs(a - 1.0) < 1e-13:
        raise ResonantNu(f"tail exponent {a} sits on the zeta pole")
    total = np.zeros_like(weights[0])
    scale = power(float(n_width), -a)
    for j in range(n_width):
        first = n_start + ((j + class_offset - n_start) % n_width)
        total = total + scale * weights[j] \
            * hurwitz_zeta(a, (first + shift) / n_width)
    return total


def transfer_apply(psi: Callable, nu: complex, eta: Representation,
                   x: float, n_max: int = 10_000, which: str = "L0", *,
                   variant: str = "equation", accel_order: int = 4,
                   taylor=None, nodes: int = 64,
                   tol: float | None = None) -> tuple[np.ndarray, float]:
    """Truncated transfer operator with resummed tail.

    which selects L0 or Linf.  For Linf three published displays of the
    series disagree and all are exposed: "equation" (the default) pairs
    the weight eta(T' T^n)^(-1) with the argument 1 - 1/(n+x);
    "remark" keeps those weights but uses 1 + 1/(n+x); "lemma" shifts
    the weight to eta(T' T^(n-1))^(-1), which makes the sum the exact
    slash sum over T' T^(n-1) and makes period functions with vanishing
    profile genuine fixed points.  The equation and lemma variants agree
    up to a left factor eta(T)^(-1).

    The n-sum is truncated at n_max and completed by expanding psi at 1
    to accel_order and resumming each Taylor order into weighted Hurwitz
    zetas over the residue classes of the weights.  Returns (value,
    error estimate); the estimate is the first omitted Taylor order's
    integral bound.  Taylor data is computed from psi unless passed in
    (rows through accel_order + 1).
    """
    if x <= 0.0:
        raise DomainError("transfer operators act on x > 0")
    if n_max < 10:
        raise DomainError("n_max must be at least 10")
    if which not in ("L0", "Linf"):
        raise DomainError(f"which must be L0 or Linf, got {which!r}")
    if variant not in ("equation", "remark", "lemma"):
        raise DomainError(f"unknown Linf variant {variant!r}")
    if accel_order < 0:
        raise DomainError("accel_order must be non-negative")

    s = 2.0 * nu + 1.0
    sigma = 2.0 * complex(nu).real + 1.0
    dim = eta.dim

    if which == "L0":
        weights = _weights(eta, primed=False)
        shift = 1.0 / x
        n_start, class_offset, sign = 0, 0, 1.0
    else:
        weights = _weights(eta, primed=True)
        shift = float(x)
        n_start = 1
        class_offset = 1 if variant == "lemma" else 0
        sign = 1.0 if variant == "remark" else -1.0
    n_width = len(weights)

    ns = np.arange(n_start, n_start + n_max + 1)
    base = ns + shift
    prefactors = np.exp(-s * np.log(base))
    terms = np.empty((len(ns), dim), dtype=complex)
    for i, n in enumerate(ns):
        u = 1.0 / base[i]
        val = np.atleast_1d(np.asarray(psi(1.0 + sign * u), dtype=complex))
        w = weights[(n - class_offset) % n_width]
        terms[i] = prefactors[i] * (w @ val)
    value = np.sum(terms, axis=0)

    if accel_order > 0:
        C = _taylor_rows(psi, taylor, accel_order + 1, nodes)
        for m in range(accel_order + 1):
            a_m = s + m
            zt = _tail_zeta(weights, a_m, shift, n_start + n_max + 1,
                            class_offset)
            value = value + sign ** m * (zt @ C[m])
        edge = n_start + n_max + 1 + shift
        decay = sigma + accel_order
        w_max = max(np.linalg.norm(wj) for wj in weights)
        est = (np.linalg.norm(C[accel_order + 1]) * w_max
               * edge ** (-decay) / decay)
    else:
        # crude geometric estimate from the local decay of the raw terms
        norms = np.linalg.norm(terms[-6:], axis=1)
        if np.any(norms == 0.0):
            est = 0.0
        else:
            p_hat = -np.polyfit(np.log(base[-6:]), np.log(norms), 1)[0]
            if p_hat <= 1.05:
                raise SlowConvergence(
                    f"raw terms decay like n^-{p_hat:.2f}; pass accel_order "
                    ">= 1 to resum the tail")
            est = float(norms[-1]) * base[-1] / (p_hat - 1.0)

    if which == "L0":
        head = power(x, -s)
        value = head * value
        est = abs(head) * est
    est = float(est)
    if tol is not None and est > tol:
        raise SlowConvergence(f"tail estimate {est:.2e} exceeds tol {tol:.2e}")
    return value, est


def fixed_point_residual(psi: Callable, nu: complex, eta: Representation,
                         x: float, n_max: int = 10_000, which: str = "L0",
                         **kwargs) -> tuple[np.ndarray, float]:
    """L psi(x) - psi(x) with the variant whose fixed points are the
    period functions (L0, or the lemma pairing for Linf)."""
    if which == "Linf":
        kwargs.setdefault("variant", "lemma")
    value, est = transfer_apply(psi, nu, eta, x, n_max, which, **kwargs)
    here = np.atleast_1d(np.asarray(psi(x), dtype=complex))
    return value - here, est


def residual_table(psi: Callable, nu: complex, eta: Representation,
                   xs: Iterable[float], n_max: int = 10_000,
                   which: str = "L0", path=None, **kwargs) -> list:
    """Fixed-point residual rows (x, residual_norm, tail_estimate, n_max),
    optionally written to CSV."""
    rows = []
    for x in xs:
        res, est = fixed_point_residual(psi, nu, eta, float(x), n_max,
                                        which, **kwargs)
        rows.append({"x": float(x),
                     "residual_norm": float(np.linalg.norm(res)),
                     "tail_estimate": est,
                     "n_max": int(n_max)})
    if path is not None:
        with open(path, "w", newline="") as handle:
            writer = csv.DictWriter(
                handle, fieldnames=["x", "residual_norm", "tail_estimate",
                                    "n_max"])
            writer.writeheader()
            writer.writerows(rows)
    return rows


def continue_psi(psi: Callable, nu: complex, eta: Representation,
                 z: complex, n: int) -> np.ndarray:
    """sum over words gamma of length n of (psi | gamma)(z).

    For Lewis solutions the sum is independent of n (each word splits by
    psi = psi|T + psi|T'), so evaluating it off (0, oo) continues psi to
    |arg z| < pi.  Every image gamma z is checked against the cut first.
    """
    z = complex(z)
    words = enumerate_Qn(n)
    for word in words:
        m = word.matrix
        if m.c * z + m.d == 0:
            raise DomainError(f"word {word.to_string()} sends {z} to infinity")
        w = complex(mobius_apply(m, z))
        if w.imag == 0.0 and w.real <= 0.0:
            raise DomainError(
                f"word {word.to_string()} sends {z} to the cut at {w}")
    total = np.zeros(eta.dim, dtype=complex)
    for word in words:
        total = total + slash(psi, word.matrix, nu, eta, z)
    return total
