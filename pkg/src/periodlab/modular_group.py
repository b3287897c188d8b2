"""Exact arithmetic in the modular group PSL(2, Z).

Group elements are carried in two interchangeable forms: freely reduced
words over the generator alphabet {S, T, t} (t denotes the inverse of T;
S is its own inverse), and sign-normalized integer matrices.  The
word-to-matrix direction is plain multiplication; the reverse direction
peels nearest-integer continued-fraction quotients, which terminates for
every determinant-one integer matrix.  All types are immutable and all
operations are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

__all__ = [
    "GeneratorLetter",
    "LETTER_S",
    "LETTER_T",
    "LETTER_TINV",
    "Word",
    "ProjectiveMatrix",
    "MAT_S",
    "MAT_T",
    "MAT_TPRIME",
    "word_to_matrix",
    "matrix_to_word",
    "mobius_apply",
]


@dataclass(frozen=True)
class GeneratorLetter:
    """One generator symbol: tag is "S", "T", or "t" (the inverse of T)."""

    tag: str

    def __post_init__(self) -> None:
        if self.tag not in ("S", "T", "t"):
            raise ValueError(f"unknown generator letter {self.tag!r}")

    def inverse(self) -> "GeneratorLetter":
        if self.tag == "T":
            return LETTER_TINV
        if self.tag == "t":
            return LETTER_T
        return LETTER_S

    def __str__(self) -> str:
        return self.tag


LETTER_S = GeneratorLetter("S")
LETTER_T = GeneratorLetter("T")
LETTER_TINV = GeneratorLetter("t")


def _cancels(x: GeneratorLetter, y: GeneratorLetter) -> bool:
    if x.tag == "S" and y.tag == "S":
        return True
    return (x.tag, y.tag) in (("T", "t"), ("t", "T"))


def _reduce(letters: Iterable[GeneratorLetter]) -> tuple[GeneratorLetter, ...]:
    stack: list[GeneratorLetter] = []
    for letter in letters:
        if stack and _cancels(stack[-1], letter):
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


@dataclass(frozen=True)
class Word:
    """Freely reduced word in the generators; reduction happens on build."""

    letters: tuple[GeneratorLetter, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "letters", _reduce(self.letters))

    @classmethod
    def from_string(cls, text: str) -> "Word":
        return cls(tuple(GeneratorLetter(ch) for ch in text))

    def to_string(self) -> str:
        return "".join(letter.tag for letter in self.letters)

    def inverse(self) -> "Word":
        return Word(tuple(letter.inverse() for letter in reversed(self.letters)))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return self.to_string() or "<empty>"


@dataclass(frozen=True)
class ProjectiveMatrix:
    """Integer matrix [[a,b],[c,d]] with det one, taken mod overall sign.

    The stored representative has c > 0, or c = 0 and d > 0, so PSL
    equality is plain field equality.
    """

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(
                f"determinant of [[{self.a},{self.b}],[{self.c},{self.d}]] is not 1")
        if self.c < 0 or (self.c == 0 and self.d < 0):
            for name in ("a", "b", "c", "d"):
                object.__setattr__(self, name, -getattr(self, name))

    @classmethod
    def identity(cls) -> "ProjectiveMatrix":
        return cls(1, 0, 0, 1)

    def __mul__(self, other: "ProjectiveMatrix") -> "ProjectiveMatrix":
        return ProjectiveMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "ProjectiveMatrix":
        return ProjectiveMatrix(self.d, -self.b, -self.c, self.a)

    def to_json(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    @classmethod
    def from_json(cls, data: list[list[int]]) -> "ProjectiveMatrix":
        (a, b), (c, d) = data
        return cls(int(a), int(b), int(c), int(d))

    def __str__(self) -> str:
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"


MAT_S = ProjectiveMatrix(0, 1, -1, 0)
MAT_T = ProjectiveMatrix(1, 1, 0, 1)
MAT_TPRIME = ProjectiveMatrix(1, 0, 1, 1)

_LETTER_MATRIX = {
    "S": MAT_S,
    "T": MAT_T,
    "t": ProjectiveMatrix(1, -1, 0, 1),
}


def word_to_matrix(word: Word) -> ProjectiveMatrix:
    """Multiply out the generator matrices of a word."""
    result = ProjectiveMatrix.identity()
    for letter in word.letters:
        result = result * _LETTER_MATRIX[letter.tag]
    return result


def _power_of_t(exponent: int) -> list[GeneratorLetter]:
    if exponent >= 0:
        return [LETTER_T] * exponent
    return [LETTER_TINV] * (-exponent)


def matrix_to_word(matrix: ProjectiveMatrix) -> Word:
    """Decompose a matrix into generator letters.

    Peels m = T^n S m' with n the nearest integer to a/c, so the lower-left
    entry of m' has at most half the magnitude of c; iteration reaches
    c = 0, which is a pure translation T^b.  The result round-trips through
    word_to_matrix exactly.
    """
    letters: list[GeneratorLetter] = []
    current = matrix
    while current.c != 0:
        quotient = (2 * current.a + current.c) // (2 * current.c)
        letters.extend(_power_of_t(quotient))
        letters.append(LETTER_S)
        shifted_a = current.a - quotient * current.c
        shifted_b = current.b - quotient * current.d
        current = ProjectiveMatrix(current.c, current.d, -shifted_a, -shifted_b)
    # c = 0 with the sign normalization forces a = d = 1, a pure translation
    letters.extend(_power_of_t(current.b))
    return Word(tuple(letters))


def mobius_apply(matrix: ProjectiveMatrix, z: complex | float) -> complex | float:
    """Linear fractional action (az+b)/(cz+d), with math.inf projectively."""
    if z == math.inf:
        if matrix.c == 0:
            return math.inf
        return matrix.a / matrix.c
    denominator = matrix.c * z + matrix.d
    if denominator == 0:
        return math.inf
    return (matrix.a * z + matrix.b) / denominator
