"""Tests for the exact group-ring calculus and unipotent machinery."""

import random

import numpy as np
import pytest

from periodlab.errors import DimensionMismatch, RelationViolation
from periodlab.group_algebra import (
    GAMMA1_RELATIONS,
    Decomposition,
    FreeWordRepresentation,
    GaussianRational,
    GroupRingElement,
    augmentation,
    build_eta_chi,
    check_unipotent_order,
    generator_decomposition,
    order_lowering,
    ring_image,
    ring_multiply,
)
from periodlab.modular_group import (
    LETTER_S,
    LETTER_T,
    LETTER_TINV,
    MAT_S,
    ProjectiveMatrix,
    Word,
    word_to_matrix,
)

ALPHABET = [LETTER_S, LETTER_T, LETTER_TINV]


def random_matrix(rng, max_len=8):
    word = Word(tuple(rng.choice(ALPHABET) for _ in range(rng.randrange(max_len + 1))))
    return word_to_matrix(word)


def random_element(rng):
    terms = {}
    for _ in range(rng.randrange(1, 4)):
        terms[random_matrix(rng, 6)] = rng.randrange(-3, 4)
    return GroupRingElement(terms)


def test_augmentation_basics():
    gamma = random_matrix(random.Random(0))
    assert augmentation(GroupRingElement.of(gamma)) == 1
    assert augmentation(GroupRingElement.difference_of(gamma)) == 0
    tau = random_matrix(random.Random(1))
    combo = GroupRingElement.of(gamma, 2) + GroupRingElement.of(tau, 3)
    assert augmentation(combo) == 5


def test_ring_multiply_expansion_and_unit():
    rng = random.Random(3)
    gamma, tau = random_matrix(rng), random_matrix(rng)
    product = ring_multiply(GroupRingElement.difference_of(gamma),
                            GroupRingElement.difference_of(tau))
    expected = (GroupRingElement.of(gamma * tau) - GroupRingElement.of(gamma)
                - GroupRingElement.of(tau) + GroupRingElement.unit())
    assert product == expected
    x = random_element(rng)
    assert ring_multiply(x, GroupRingElement.unit()) == x


def test_ring_multiply_associative_and_augmentation_multiplicative():
    rng = random.Random(7)
    for _ in range(50):
        x, y, z = random_element(rng), random_element(rng), random_element(rng)
        assert ring_multiply(ring_multiply(x, y), z) == \
            ring_multiply(x, ring_multiply(y, z))
        assert augmentation(ring_multiply(x, y)) == \
            augmentation(x) * augmentation(y)


def test_gaussian_rational_exactness():
    third = GaussianRational.coerce(1) * GaussianRational.coerce(3)
    assert complex(third) == 3
    mixed = GaussianRational.coerce(1 + 2j) * GaussianRational.coerce(2 - 1j)
    assert complex(mixed) == (1 + 2j) * (2 - 1j)


def test_decomposition_base_case():
    decomposition = generator_decomposition(MAT_S)
    assert len(decomposition.summands) == 1
    element, letter = decomposition.summands[0]
    assert letter == LETTER_S
    assert element == GroupRingElement.unit()


def test_decomposition_reconstructs_exactly():
    rng = random.Random(11)
    for _ in range(100):
        gamma = random_matrix(rng)
        decomposition = generator_decomposition(gamma)
        assert decomposition.reconstruct() == \
            GroupRingElement.difference_of(gamma)
        for _, letter in decomposition.summands:
            assert letter in (LETTER_S, LETTER_T)


def test_eta_chi_free_group_values():
    eta = build_eta_chi({"a": 1.0, "b": -2.0})
    assert np.allclose(eta.evaluate("aba"), np.eye(2))
    assert eta.evaluate("aa")[0, 1] == 2


def test_eta_chi_zero_is_identity():
    eta = build_eta_chi({"S": 0.0, "T": 0.0}, GAMMA1_RELATIONS)
    assert np.allclose(eta.evaluate("STSTS"), np.eye(2))


def test_eta_chi_rejects_nonhomomorphism():
    # 3 chi(S) + 3 chi(T) = 0 and 2 chi(S) = 0 force chi = 0
    with pytest.raises(RelationViolation):
        build_eta_chi({"S": 0.0, "T": 1.0}, GAMMA1_RELATIONS)


def test_order_lowering_values_and_additivity():
    eta = build_eta_chi({"a": 1.0, "b": -2.0})
    v = np.array([0.0, 1.0])
    out = order_lowering(eta, v, "ab")
    assert np.allclose(out, [-1.0, 0.0])  # chi(ab) = 1 - 2
    rng = random.Random(13)
    for _ in range(30):
        w1 = "".join(rng.choice("ab") for _ in range(5))
        w2 = "".join(rng.choice("ab") for _ in range(5))
        assert np.allclose(order_lowering(eta, v, w1 + w2),
                           order_lowering(eta, v, w1)
                           + order_lowering(eta, v, w2))


def test_order_lowering_zero_iff_fixed_vector():
    eta = build_eta_chi({"a": 1.0, "b": -2.0})
    fixed = np.array([1.0, 0.0])
    for name in ("a", "b"):
        assert np.allclose(order_lowering(eta, fixed, name), 0.0)
    assert np.linalg.norm(order_lowering(eta, [0.0, 1.0], "a")) > 0.5


def test_order_lowering_dimension_checked():
    eta = build_eta_chi({"a": 1.0})
    with pytest.raises(DimensionMismatch):
        order_lowering(eta, [1.0, 2.0, 3.0], "a")


def test_unipotency_trivial_and_unitriangular():
    trivial = build_eta_chi({"S": 0.0, "T": 0.0}, GAMMA1_RELATIONS)
    report = check_unipotent_order(trivial, 0)
    assert report["mode"] == "exact" and report["passed"]
    eta = build_eta_chi({"a": 1.0, "b": -2.0})
    assert check_unipotent_order(eta, 1)["passed"]
    assert not check_unipotent_order(eta, 0)["passed"]
    sampled = check_unipotent_order(eta, 1, mode="sampled", samples=100)
    assert sampled["passed"] and sampled["mode"] == "sampled"


def test_character_is_not_unipotent_order_zero():
    character = FreeWordRepresentation(
        {"T": np.array([[np.exp(1j * np.pi / 3)]])})
    report = check_unipotent_order(character, 0)
    assert not report["passed"]
    assert report["max_norm"] > 0.5


def test_ideal_power_kills_representation():
    # j in the square of the augmentation ideal of a free group, applied
    # term-wise to a length-1 unipotent representation, gives zero
    rng = random.Random(17)
    eta = build_eta_chi({"a": 0.7, "b": 2.3})
    for _ in range(20):
        w1 = "".join(rng.choice("ab") for _ in range(rng.randrange(1, 5)))
        w2 = "".join(rng.choice("ab") for _ in range(rng.randrange(1, 5)))
        j = ring_multiply(GroupRingElement({w1: 1, "": -1}),
                          GroupRingElement({w2: 1, "": -1}))
        assert np.max(np.abs(ring_image(j, eta))) < 1e-12


def test_group_ring_json_round_trip():
    rng = random.Random(19)
    element = random_element(rng)
    recovered = GroupRingElement.from_json(element.to_json())
    assert recovered == element
