"""Tests for generator-matrix representations of the modular group."""

import cmath
import math
import random

import numpy as np
import pytest

from periodlab.errors import DimensionMismatch
from periodlab.modular_group import (
    LETTER_S,
    LETTER_T,
    LETTER_TINV,
    MAT_TPRIME,
    ProjectiveMatrix,
    Word,
    word_to_matrix,
)
from periodlab.representations import (
    Representation,
    character_representation,
    direct_sum,
    parabolic_triviality_check,
    representation_from_json,
    representation_to_json,
    trivial_representation,
    validate_representation,
)

ALPHABET = [LETTER_S, LETTER_T, LETTER_TINV]


def random_matrix(rng, max_len=10):
    return word_to_matrix(
        Word(tuple(rng.choice(ALPHABET) for _ in range(rng.randrange(max_len + 1)))))


def test_trivial_representation_validates():
    report = validate_representation(trivial_representation())
    assert report["passed"]
    assert report["max_deviation"] == 0.0


def test_sixth_root_character_validates():
    rep = character_representation(1)
    assert rep.N == 6
    assert cmath.isclose(rep.rhoT[0, 0], cmath.exp(1j * math.pi / 3))
    assert rep.rhoS[0, 0] == -1.0
    assert validate_representation(rep)["passed"]


def test_all_six_characters_validate():
    for b in range(6):
        rep = character_representation(b)
        assert validate_representation(rep)["passed"], b
        assert abs(rep.rhoT[0, 0] ** rep.N - 1.0) < 1e-14


def test_bad_torsion_fails():
    rep = Representation(1, np.array([[1.0]]), np.array([[2.0]]), 4)
    assert not validate_representation(rep)["passed"]


def test_dimension_mismatch_raised():
    with pytest.raises(DimensionMismatch):
        Representation(2, np.eye(2), np.eye(3), 1)


def test_evaluate_identity_and_lower_triangular():
    rep = character_representation(2)
    assert np.allclose(rep.evaluate(ProjectiveMatrix.identity()), np.eye(1))
    expected = rep.rhoT @ np.linalg.inv(rep.rhoS) @ rep.rhoT
    assert np.allclose(rep.evaluate(MAT_TPRIME), expected)


def test_evaluate_known_word_identity():
    # S T^{-1} S T^{-1} and T S are the same group element
    rep = character_representation(1)
    left = word_to_matrix(Word.from_string("StSt"))
    right = word_to_matrix(Word.from_string("TS"))
    assert left == right
    assert np.allclose(rep.evaluate(left), rep.evaluate(right))


def test_evaluate_is_word_independent():
    rep = character_representation(5)
    rng = random.Random(23)
    images = {"S": rep.rhoS, "T": rep.rhoT,
              "t": np.linalg.inv(rep.rhoT)}
    for _ in range(40):
        letters = tuple(rng.choice(ALPHABET) for _ in range(rng.randrange(10)))
        direct = np.eye(rep.dim, dtype=complex)
        for letter in letters:
            direct = direct @ images[letter.tag]
        via_matrix = rep.evaluate(word_to_matrix(Word(letters)))
        # the two words differ by relations, which the images satisfy
        assert np.allclose(via_matrix, direct)


def test_evaluate_homomorphism():
    rep = direct_sum(character_representation(1), character_representation(4))
    rng = random.Random(29)
    for _ in range(40):
        m1, m2 = random_matrix(rng), random_matrix(rng)
        assert np.allclose(rep.evaluate(m1 * m2),
                           rep.evaluate(m1) @ rep.evaluate(m2))


def test_parabolic_triviality():
    assert parabolic_triviality_check(trivial_representation())["passed"]
    rep = character_representation(1)
    assert parabolic_triviality_check(rep)["passed"]
    claimed_n4 = Representation(1, rep.rhoS, rep.rhoT, 4)
    assert not parabolic_triviality_check(claimed_n4)["passed"]


def test_direct_sum_width_is_lcm():
    rep = direct_sum(character_representation(2), character_representation(3))
    assert rep.dim == 2
    assert rep.N == 6
    assert validate_representation(rep)["passed"]


def test_json_round_trip():
    rep = direct_sum(character_representation(1), trivial_representation())
    data = representation_to_json(rep)
    recovered = representation_from_json(data)
    assert recovered.dim == rep.dim and recovered.N == rep.N
    assert np.allclose(recovered.rhoS, rep.rhoS)
    assert np.allclose(recovered.rhoT, rep.rhoT)
