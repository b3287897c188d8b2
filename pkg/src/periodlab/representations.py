"""Finite-dimensional representations of the modular group.

A representation is given by the images of the two generators; evaluation
on an arbitrary group element goes through the generator word of its
matrix.  The defining relations (S image squares to one, ST image cubes to
one, T image has finite order N) are validated numerically, and N plays
the role of the cusp width throughout the package.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch
from .modular_group import ProjectiveMatrix, Word, matrix_to_word

__all__ = [
    "Representation",
    "validate_representation",
    "parabolic_triviality_check",
    "trivial_representation",
    "character_representation",
    "direct_sum",
    "representation_to_json",
    "representation_from_json",
]


@dataclass(frozen=True)
class Representation:
    """Generator images rhoS, rhoT of size dim, with rhoT of order N."""

    dim: int
    rhoS: np.ndarray
    rhoT: np.ndarray
    N: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "rhoS", np.asarray(self.rhoS, dtype=complex))
        object.__setattr__(self, "rhoT", np.asarray(self.rhoT, dtype=complex))
        for name in ("rhoS", "rhoT"):
            matrix = getattr(self, name)
            if matrix.shape != (self.dim, self.dim):
                raise DimensionMismatch(
                    f"{name} has shape {matrix.shape}, expected "
                    f"({self.dim}, {self.dim})")
        object.__setattr__(self, "_rhoT_inv", np.linalg.inv(self.rhoT))

    def generator_images(self) -> dict[str, np.ndarray]:
        return {"S": self.rhoS, "T": self.rhoT}

    def evaluate(self, m: ProjectiveMatrix) -> np.ndarray:
        """Image of a group element: generator images along its word."""
        rho_t_inv = self._rhoT_inv
        result = np.eye(self.dim, dtype=complex)
        for letter in matrix_to_word(m).letters:
            if letter.tag == "S":
                result = result @ self.rhoS
            elif letter.tag == "T":
                result = result @ self.rhoT
            else:
                result = result @ rho_t_inv
        return result


def validate_representation(rep: Representation, tol: float | None = None) -> dict:
    """Check rhoS^2 = I, (rhoS rhoT)^3 = I, rhoT^N = I to tolerance."""
    if tol is None:
        tol = 1e-12 * rep.dim
    identity = np.eye(rep.dim)
    deviations = {
        "S_squared": float(np.max(np.abs(rep.rhoS @ rep.rhoS - identity))),
        "ST_cubed": float(np.max(np.abs(
            np.linalg.matrix_power(rep.rhoS @ rep.rhoT, 3) - identity))),
        "T_order_N": float(np.max(np.abs(
            np.linalg.matrix_power(rep.rhoT, rep.N) - identity))),
    }
    worst = max(deviations.values())
    return {"deviations": deviations, "max_deviation": worst, "tol": tol,
            "passed": worst <= tol}


def parabolic_triviality_check(rep: Representation,
                               exponents: Sequence[int] = (1, 2, 3),
                               seed: int = 0) -> dict:
    """Verify rhoT^N = I and the same for conjugates of T^N.

    Conjugates are sampled as w T^(k N) w^{-1} over random short words w and
    the supplied exponent multiples k; all of them must map to the identity.
    """
    import random as _random

    rng = _random.Random(seed)
    identity = np.eye(rep.dim)
    worst = float(np.max(np.abs(
        np.linalg.matrix_power(rep.rhoT, rep.N) - identity)))
    alphabet = "ST"
    for k in exponents:
        power = np.linalg.matrix_power(rep.rhoT, k * rep.N)
        for _ in range(4):
            word = "".join(rng.choice(alphabet) for _ in range(rng.randrange(6)))
            conjugator = np.eye(rep.dim, dtype=complex)
            for ch in word:
                conjugator = conjugator @ (rep.rhoS if ch == "S" else rep.rhoT)
            image = conjugator @ power @ np.linalg.inv(conjugator)
            worst = max(worst, float(np.max(np.abs(image - identity))))
    tol = 1e-10 * rep.dim
    return {"max_deviation": worst, "tol": tol, "passed": worst <= tol}


def trivial_representation() -> Representation:
    return Representation(1, np.array([[1.0]]), np.array([[1.0]]), 1)


def character_representation(b: int) -> Representation:
    """The b-th character of the abelianized modular group (b mod 6).

    Sends T to e^(i pi b / 3) and S to (-1)^b; the two are compatible
    because the abelianization is cyclic of order six with T S generating.
    The cusp width N is the order of the T image.
    """
    b = b % 6
    rho_t = cmath.exp(1j * math.pi * b / 3.0)
    rho_s = (-1.0) ** b
    order = 6 // math.gcd(b, 6) if b else 1
    return Representation(1, np.array([[rho_s]]), np.array([[rho_t]]), order)


def direct_sum(*reps: Representation) -> Representation:
    """Block-diagonal sum; the width is the lcm of the summand widths."""
    dim = sum(rep.dim for rep in reps)
    rho_s = np.zeros((dim, dim), dtype=complex)
    rho_t = np.zeros((dim, dim), dtype=complex)
    offset = 0
    order = 1
    for rep in reps:
        stop = offset + rep.dim
        rho_s[offset:stop, offset:stop] = rep.rhoS
        rho_t[offset:stop, offset:stop] = rep.rhoT
        order = order * rep.N // math.gcd(order, rep.N)
        offset = stop
    return Representation(dim, rho_s, rho_t, order)


def _matrix_to_json(matrix: np.ndarray) -> list:
    return [[[float(entry.real), float(entry.imag)] for entry in row]
            for row in matrix]


def _matrix_from_json(data: list) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in data])


def representation_to_json(rep: Representation) -> dict:
    return {"dim": rep.dim, "N": rep.N,
            "rhoS": _matrix_to_json(rep.rhoS),
            "rhoT": _matrix_to_json(rep.rhoT)}


def representation_from_json(data: dict | str) -> Representation:
    if isinstance(data, str):
        data = json.loads(data)
    return Representation(int(data["dim"]),
                          _matrix_from_json(data["rhoS"]),
                          _matrix_from_json(data["rhoT"]),
                          int(data["N"]))
