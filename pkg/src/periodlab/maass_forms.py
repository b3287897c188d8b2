"""Maass cusp form data and pointwise evaluation.

A form is a finite table of Fourier coefficient vectors v_k (k != 0) for

    u(x + iy) = sum_k e^(2 pi i k x / N) sqrt(y) K_nu(2 pi |k| y / N) v_k,

together with the spectral parameter nu and the cusp width N.  Evaluation
returns the truncated sum and an upper bound on the dropped tail from the
exponential decay of the K-Bessel factor.  Residual helpers quantify how
well the data satisfies the eigenvalue equation and the automorphy
condition; the boundary profiles feed the L-function module.
"""

from __future__ import annotations

import cmath
import json
import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .errors import DomainError
from .modular_group import ProjectiveMatrix, mobius_apply
from .special_functions import bessel_k, bessel_k_bound

__all__ = [
    "MaassFormData",
    "evaluate_u",
    "laplace_residual",
    "automorphy_residual",
    "u_profile",
    "form_from_json",
    "form_to_json",
    "load_form",
    "fixture_directory",
]


@dataclass(frozen=True)
class MaassFormData:
    """Coefficient table of a vector-valued Maass cusp form."""

    nu: complex
    N: int
    dim: int
    coeffs: Mapping[int, np.ndarray]
    source: str = ""
    est_accuracy: float = 0.0

    def __post_init__(self) -> None:
        table = {}
        for k, vec in self.coeffs.items():
            if k == 0:
                raise DomainError("cusp form data must not carry k = 0")
            arr = np.asarray(vec, dtype=complex)
            if arr.shape != (self.dim,):
                raise DomainError(f"coefficient {k} has shape {arr.shape}")
            table[int(k)] = arr
        object.__setattr__(self, "coeffs", table)

    @property
    def K(self) -> int:
        return max(abs(k) for k in self.coeffs)

    def coefficient_bound(self) -> float:
        return max(float(np.linalg.norm(v)) for v in self.coeffs.values())


def _bessel_cache(form: MaassFormData, y: float) -> dict[int, complex]:
    values = {}
    for k in {abs(k) for k in form.coeffs}:
        values[k] = bessel_k(form.nu, 2.0 * math.pi * k * y / form.N)
    return values


def _tail_bound(form: MaassFormData, y: float) -> float:
    """Bound on the dropped terms |k| > K, using |K_nu(x)| <= K_{Re nu}(x)
    and the K0-type envelope; each unit step in k gains e^(-2 pi y/N)."""
    x_next = 2.0 * math.pi * (form.K + 1) * y / form.N
    ratio = math.exp(-2.0 * math.pi * y / form.N)
    return (2.0 * form.coefficient_bound() * math.sqrt(y)
            * bessel_k_bound(x_next) / (1.0 - ratio))


def evaluate_u(form: MaassFormData, z: complex) -> tuple[np.ndarray, float]:
    """Truncated Fourier-Bessel sum at z and a bound on the dropped tail."""
    z = complex(z)
    if z.imag <= 0.0:
        raise DomainError(f"evaluation point {z} not in the upper half plane")
    x, y = z.real, z.imag
    bessels = _bessel_cache(form, y)
    total = np.zeros(form.dim, dtype=complex)
    root_y = math.sqrt(y)
    for k, vec in form.coeffs.items():
        phase = cmath.exp(2j * math.pi * k * x / form.N)
        total = total + (phase * root_y * bessels[abs(k)]) * vec
    return total, _tail_bound(form, y)


def laplace_residual(form: MaassFormData, z: complex, h: float = 1e-3,
                     nu_claim: complex | None = None) -> float:
    """Five-point finite-difference residual of the eigenvalue equation.

    Applies -y^2 (d^2/dx^2 + d^2/dy^2) with central differences of step h
    and compares against (1/4 - nu^2) u(z); O(h^2) for exact form data.
    Each K-Bessel term is an exact eigenfunction of the form's own nu, so
    an eigenvalue mismatch is probed by passing a different nu_claim.
    """
    z = complex(z)
    if z.imag <= 2.0 * h:
        raise DomainError("need Im z > 2h for the finite-difference stencil")
    center, _ = evaluate_u(form, z)
    east, _ = evaluate_u(form, z + h)
    west, _ = evaluate_u(form, z - h)
    north, _ = evaluate_u(form, z + 1j * h)
    south, _ = evaluate_u(form, z - 1j * h)
    laplacian = -(z.imag ** 2) * (east + west + north + south - 4.0 * center) / h ** 2
    nu = form.nu if nu_claim is None else complex(nu_claim)
    eigenvalue = 0.25 - nu ** 2
    return float(np.linalg.norm(laplacian - eigenvalue * center))


def automorphy_residual(form: MaassFormData, eta, gamma: ProjectiveMatrix,
                        points: Iterable[complex]) -> float:
    """Max over points of ||u(gamma z) - eta(gamma) u(z)||."""
    image = eta.evaluate(gamma)
    worst = 0.0
    for z in points:
        moved = mobius_apply(gamma, complex(z))
        u_moved, _ = evaluate_u(form, moved)
        u_here, _ = evaluate_u(form, complex(z))
        worst = max(worst, float(np.linalg.norm(u_moved - image @ u_here)))
    return worst


def u_profile(form: MaassFormData, y: float, eps: int) -> np.ndarray:
    """Boundary profiles u_0(y) = u(iy)/sqrt(y) and
    u_1(y) = (sqrt(y)/(2 pi i)) d/dx u(x+iy) at x = 0 (termwise)."""
    if y <= 0.0:
        raise DomainError("profile height must be positive")
    if eps not in (0, 1):
        raise DomainError("eps selects the even (0) or odd (1) profile")
    bessels = _bessel_cache(form, y)
    total = np.zeros(form.dim, dtype=complex)
    for k, vec in form.coeffs.items():
        weight = bessels[abs(k)]
        if eps == 1:
            weight = weight * y * k / form.N
        total = total + weight * vec
    return total


def form_to_json(form: MaassFormData) -> dict:
    coeffs = []
    for k in sorted(form.coeffs):
        vec = form.coeffs[k]
        coeffs.append({"k": k,
                       "v": [[float(c.real), float(c.imag)] for c in vec]})
    return {"nu": [form.nu.real, form.nu.imag], "N": form.N,
            "dim": form.dim, "coeffs": coeffs,
            "source": form.source, "est_accuracy": form.est_accuracy}


def form_from_json(data: dict | str) -> MaassFormData:
    if isinstance(data, str):
        data = json.loads(data)
    coeffs = {}
    for item in data["coeffs"]:
        coeffs[int(item["k"])] = np.array(
            [complex(re, im) for re, im in item["v"]])
    return MaassFormData(complex(*data["nu"]), int(data["N"]),
                         int(data["dim"]), coeffs,
                         source=data.get("source", ""),
                         est_accuracy=float(data.get("est_accuracy", 0.0)))


def fixture_directory() -> Path:
    """Installed fixture directory, overridable via PERIODLAB_FIXTURES."""
    override = os.environ.get("PERIODLAB_FIXTURES")
    if override:
        return Path(override)
    return Path(__file__).resolve().parent / "fixtures"


def load_form(name: str) -> MaassFormData:
    """Load a fixture by bare name (e.g. "even_13"), file name, or path."""
    candidate = Path(name)
    if not candidate.exists():
        candidate = fixture_directory() / name
        if not candidate.exists() and not name.endswith(".json"):
            candidate = fixture_directory() / f"{name}.json"
    if not candidate.exists():
        raise FileNotFoundError(f"no fixture named {name!r}")
    return form_from_json(candidate.read_text())
