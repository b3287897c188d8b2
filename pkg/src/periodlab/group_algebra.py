"""Exact group-ring calculus over the modular group.

Elements of the group ring carry Gaussian-rational coefficients so the
generator decomposition of gamma - 1 and the augmentation identities can be
verified exactly.  Keys of a GroupRingElement may be ProjectiveMatrix values
(the usual case) or any hashable values with a * operator, e.g. plain
strings as free-monoid words; the latter is how unipotent representations
attached to a character of a free group are exercised, since every group
homomorphism from the full modular group to the complex numbers vanishes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from .errors import DimensionMismatch, RelationViolation
from .modular_group import (
    LETTER_S,
    LETTER_T,
    GeneratorLetter,
    ProjectiveMatrix,
    Word,
    matrix_to_word,
    word_to_matrix,
)

__all__ = [
    "GaussianRational",
    "GroupRingElement",
    "Decomposition",
    "augmentation",
    "ring_multiply",
    "generator_decomposition",
    "FreeWordRepresentation",
    "GAMMA1_RELATIONS",
    "build_eta_chi",
    "ring_image",
    "order_lowering",
    "check_unipotent_order",
]


@dataclass(frozen=True)
class GaussianRational:
    """Exact complex number with rational real and imaginary parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    @classmethod
    def coerce(cls, value: Any) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        return cls(Fraction(value))

    def __add__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __mul__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re * other.re - self.im * other.im,
                                self.re * other.im + self.im * other.re)

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __str__(self) -> str:
        return f"{self.re}+{self.im}i"


class GroupRingElement:
    """Finite formal sum of group elements with exact coefficients.

    Immutable by convention: terms is built once and never mutated.  Zero
    coefficients are dropped on construction.  Keys combine under * in the
    convolution product, except str keys which concatenate (free-monoid
    words).
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Any, Any]):
        cleaned: dict[Any, GaussianRational] = {}
        for key, value in terms.items():
            coeff = GaussianRational.coerce(value)
            if coeff:
                cleaned[key] = coeff
        self.terms = cleaned

    @classmethod
    def of(cls, key: Any, coeff: Any = 1) -> "GroupRingElement":
        return cls({key: coeff})

    @classmethod
    def unit(cls) -> "GroupRingElement":
        return cls({ProjectiveMatrix.identity(): 1})

    @classmethod
    def difference_of(cls, matrix: ProjectiveMatrix) -> "GroupRingElement":
        """The element matrix - 1 of the augmentation ideal."""
        return cls({matrix: 1}) - cls.unit()

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        combined = dict(self.terms)
        for key, coeff in other.terms.items():
            combined[key] = combined.get(key, GaussianRational()) + coeff
        return GroupRingElement(combined)

    def __sub__(self, other: "GroupRingElement") -> "GroupRingElement":
        return self + (-other)

    def __neg__(self) -> "GroupRingElement":
        return GroupRingElement({k: -c for k, c in self.terms.items()})

    def scaled(self, factor: Any) -> "GroupRingElement":
        scale = GaussianRational.coerce(factor)
        return GroupRingElement({k: c * scale for k, c in self.terms.items()})

    def __mul__(self, other: "GroupRingElement") -> "GroupRingElement":
        product: dict[Any, GaussianRational] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                key = k1 + k2 if isinstance(k1, str) else k1 * k2
                contribution = c1 * c2
                if key in product:
                    product[key] = product[key] + contribution
                else:
                    product[key] = contribution
        return GroupRingElement(product)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GroupRingElement) and self.terms == other.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def to_json(self) -> list[dict]:
        out = []
        for key, coeff in self.terms.items():
            out.append({"matrix": key.to_json(),
                        "coeff_re": float(coeff.re),
                        "coeff_im": float(coeff.im)})
        return out

    @classmethod
    def from_json(cls, data: Iterable[dict]) -> "GroupRingElement":
        terms: dict[Any, Any] = {}
        for item in data:
            key = ProjectiveMatrix.from_json(item["matrix"])
            terms[key] = complex(item["coeff_re"], item["coeff_im"])
        return cls(terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*{k}" for k, c in self.terms.items())


def augmentation(x: GroupRingElement) -> complex:
    """Sum of coefficients; kernel is the augmentation ideal."""
    total = GaussianRational()
    for coeff in x.terms.values():
        total = total + coeff
    return complex(total)


def ring_multiply(x: GroupRingElement, y: GroupRingElement) -> GroupRingElement:
    return x * y


@dataclass(frozen=True)
class Decomposition:
    """gamma - 1 written as sum x_i (s_i - 1) over generator letters."""

    summands: tuple[tuple[GroupRingElement, GeneratorLetter], ...]

    def reconstruct(self) -> GroupRingElement:
        total = GroupRingElement({})
        for element, letter in self.summands:
            generator = word_to_matrix(Word((letter,)))
            total = total + element * GroupRingElement.difference_of(generator)
        return total


def generator_decomposition(gamma: ProjectiveMatrix) -> Decomposition:
    """Write gamma - 1 as x_S (S - 1) + x_T (T - 1), exactly.

    Walks the generator word of gamma, telescoping sigma*s - 1 =
    (sigma - 1) + sigma (s - 1); an inverse letter contributes through
    s^{-1} - 1 = -s^{-1} (s - 1), so only the two generators appear.
    """
    pieces: dict[GeneratorLetter, GroupRingElement] = {
        LETTER_S: GroupRingElement({}),
        LETTER_T: GroupRingElement({}),
    }
    prefix = ProjectiveMatrix.identity()
    for letter in matrix_to_word(gamma).letters:
        step = word_to_matrix(Word((letter,)))
        if letter.tag == "t":
            carrier = GroupRingElement.of(prefix * step).scaled(-1)
            pieces[LETTER_T] = pieces[LETTER_T] + carrier
        else:
            target = LETTER_S if letter.tag == "S" else LETTER_T
            pieces[target] = pieces[target] + GroupRingElement.of(prefix)
        prefix = prefix * step
    summands = tuple((element, letter) for letter, element in pieces.items()
                     if element)
    return Decomposition(summands)


class FreeWordRepresentation:
    """Matrices attached to named generator letters, multiplied along words.

    Words are strings over the generator names (one character each); no
    relations are imposed, so this carries representations of a free group.
    """

    def __init__(self, images: Mapping[str, np.ndarray]):
        self.images = {name: np.asarray(m, dtype=complex)
                       for name, m in images.items()}
        dims = {m.shape for m in self.images.values()}
        if len(dims) != 1 or any(s[0] != s[1] for s in dims):
            raise DimensionMismatch("generator images must be square, equal size")
        self.dim = next(iter(dims))[0]

    def generator_images(self) -> dict[str, np.ndarray]:
        return dict(self.images)

    def evaluate(self, word: Iterable[str]) -> np.ndarray:
        result = np.eye(self.dim, dtype=complex)
        for name in word:
            result = result @ self.images[name]
        return result


GAMMA1_RELATIONS = (Word.from_string("SS"), Word.from_string("STSTST"))


def _chi_of_letter(letter: GeneratorLetter,
                   chi_values: Mapping[str, complex]) -> complex:
    if letter.tag == "t":
        return -complex(chi_values.get("T", 0.0))
    return complex(chi_values.get(letter.tag, 0.0))


def build_eta_chi(chi_values: Mapping[str, complex],
                  relations: Sequence[Word] = ()) -> FreeWordRepresentation:
    """Unitriangular representation g -> [[1, chi(g)],[0,1]].

    chi must vanish on every supplied relation word (letter sum, with
    inverse letters negated); otherwise it is not a homomorphism and
    RelationViolation is raised.  With the full modular group's relations
    this forces chi = 0, which is why nontrivial instances live over free
    generators.
    """
    for relation in relations:
        total = sum(_chi_of_letter(letter, chi_values)
                    for letter in relation.letters)
        if abs(total) > 1e-12:
            raise RelationViolation(
                f"chi sums to {total} on relation {relation}")
    images = {}
    for name, value in chi_values.items():
        images[name] = np.array([[1.0, complex(value)], [0.0, 1.0]],
                                dtype=complex)
    return FreeWordRepresentation(images)


def ring_image(x: GroupRingElement, eta) -> np.ndarray:
    """Apply a representation term-wise: sum of coeff * eta(key)."""
    result = np.zeros((eta.dim, eta.dim), dtype=complex)
    for key, coeff in x.terms.items():
        result += complex(coeff) * eta.evaluate(key)
    return result


def order_lowering(eta, v: Sequence[complex], gamma) -> np.ndarray:
    """(eta(gamma) - 1) v, the group-ring action of gamma - 1 on a vector."""
    vector = np.asarray(v, dtype=complex)
    if vector.shape != (eta.dim,):
        raise DimensionMismatch(
            f"vector has shape {vector.shape}, representation dim {eta.dim}")
    return (eta.evaluate(gamma) - np.eye(eta.dim)) @ vector


def _random_image(eta, rng) -> np.ndarray:
    names = sorted(eta.generator_images())
    word = [rng.choice(names) for _ in range(rng.randrange(1, 9))]
    result = np.eye(eta.dim, dtype=complex)
    images = eta.generator_images()
    for name in word:
        result = result @ images[name]
    return result


def _orthonormal_extend(basis: list[np.ndarray], candidate: np.ndarray,
                        tol: float) -> bool:
    vec = candidate.ravel()
    norm = np.linalg.norm(vec)
    if norm <= tol:
        return False
    for _ in range(2):
        for b in basis:
            vec = vec - np.vdot(b, vec) * b
    residual = np.linalg.norm(vec)
    if residual > tol * max(1.0, norm):
        basis.append(vec / residual)
        return True
    return False


def _span_closure(seed: list[np.ndarray], multipliers: list[np.ndarray],
                  tol: float, two_sided: bool) -> list[np.ndarray]:
    basis: list[np.ndarray] = []
    kept: list[np.ndarray] = []
    queue = list(seed)
    while queue:
        mat = queue.pop()
        if _orthonormal_extend(basis, mat, tol):
            kept.append(mat)
            for g in multipliers:
                queue.append(mat @ g)
                if two_sided:
                    queue.append(g @ mat)
    return kept


def check_unipotent_order(eta, q: int, samples: int = 200, *,
                          mode: str = "auto", tol: float = 1e-10,
                          seed: int = 0) -> dict:
    """Check that every product of q+1 augmentation-ideal images vanishes.

    Exact mode (q <= 2, dim <= 4) decides the statement by closing the
    two-sided ideal generated by eta(g) - 1 under generator multiplication
    and testing that its (q+1)-st power spans only zero.  Sampling mode
    multiplies q+1 random images eta(gamma_i) - 1 and reports the largest
    operator norm seen.
    """
    import random as _random

    images = eta.generator_images()
    if mode == "auto":
        mode = "exact" if (q <= 2 and eta.dim <= 4) else "sampled"
    if mode == "exact":
        if q > 2 or eta.dim > 4:
            raise ValueError("exact mode supports q <= 2 and dim <= 4 only")
        identity = np.eye(eta.dim, dtype=complex)
        generators = list(images.values())
        seeds = [g - identity for g in generators]
        ideal = _span_closure(seeds, generators, tol, two_sided=True)
        power = ideal
        for _ in range(q):
            power = _span_closure(
                [p @ j for p in power for j in ideal], [], tol,
                two_sided=False)
        worst = max((float(np.linalg.norm(p, 2)) for p in power), default=0.0)
        return {"mode": "exact", "q": q, "dim": eta.dim,
                "max_norm": worst, "passed": worst <= tol}
    rng = _random.Random(seed)
    identity = np.eye(eta.dim, dtype=complex)
    worst = 0.0
    for _ in range(samples):
        product = np.eye(eta.dim, dtype=complex)
        for _ in range(q + 1):
            product = product @ (_random_image(eta, rng) - identity)
        worst = max(worst, float(np.linalg.norm(product, 2)))
    return {"mode": "sampled", "q": q, "dim": eta.dim, "samples": samples,
            "max_norm": worst, "passed": worst <= tol}
