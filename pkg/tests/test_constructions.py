from __future__ import annotations

import numpy as np
import pytest
from pytest_cases import parametrize

from trusskit.constructions import (
    _require_bijective,
    alpha_truss,
    conjugation_map,
    constant_truss,
    endo_pair_truss,
    endomorphism_subtruss,
    endomorphism_truss,
    mapping_truss,
    matrix_truss,
    semidirect_truss,
    subset_semidirect_truss,
)
from trusskit.errors import (
    CarrierTooLarge,
    IndexOutOfRange,
    NotAdditive,
    NotBijective,
    NotClosed,
    NotEndomorphism,
    NotIdempotent,
    NotIdempotentMatrix,
    NotInKernel,
)
from trusskit.heap import FiniteHeap, group_homomorphisms
from trusskit.truss import (
    TrussMorphism,
    classify_subheap,
    opposite,
    special_elements,
    truss_isomorphisms,
)
from trusskit.ztruss import zn_truss


def test_constant_truss() -> None:
    T = constant_truss(FiniteHeap.from_cyclic([3]), 1)
    assert T.mul_table.tolist() == [[1, 1, 1]] * 3
    s = special_elements(T)
    assert s.absorber == 1
    assert s.identity is None

    with pytest.raises(IndexOutOfRange):
        constant_truss(FiniteHeap.from_cyclic([3]), 3)


@parametrize("variant", ["first", "second"])
def test_alpha_truss_of_constant_is_addition(z4: FiniteHeap, variant: str) -> None:
    T = alpha_truss(z4, [0, 0, 0, 0], variant)
    np.testing.assert_array_equal(T.mul_table, z4.add_table)


def test_alpha_truss_of_identity_is_projection(z4: FiniteHeap) -> None:
    first = alpha_truss(z4, [0, 1, 2, 3], "first")
    assert first.mul_table.tolist() == [[0, 1, 2, 3]] * 4
    second = alpha_truss(z4, [0, 1, 2, 3], "second")
    assert second.mul_table.tolist() == [[x] * 4 for x in range(4)]


@parametrize("alpha", [[0, 0, 2, 2], [0, 1, 0, 1], [1, 1, 3, 3], [3, 3, 3, 3]])
def test_second_variant_is_opposite(v4: FiniteHeap, alpha: list[int]) -> None:
    first = alpha_truss(v4, alpha, "first")
    assert alpha_truss(v4, alpha, "second") == opposite(first)


def test_alpha_truss_reproduces_v4_table(v4: FiniteHeap, v4_table: list) -> None:
    assert alpha_truss(v4, [1, 1, 3, 3], "second").mul_table.tolist() == v4_table


def test_alpha_truss_rejects(z4: FiniteHeap) -> None:
    with pytest.raises(NotIdempotent) as e:
        alpha_truss(z4, [1, 2, 3, 0])
    assert e.value.witness == (0,)

    with pytest.raises(NotEndomorphism) as e:
        alpha_truss(z4, [0, 1, 0, 1])
    assert e.value.witness == (0, 1, 0)


def test_endo_pair_truss_reproduces_v4_table(v4: FiniteHeap, v4_table: list) -> None:
    T = endo_pair_truss(v4, [0, 0, 2, 2], 1, "first")
    assert T.mul_table.tolist() == v4_table

    s = special_elements(T)
    assert s.identity is None
    assert s.absorber is None
    assert s.central == ()
    assert s.right_braceable


def test_endo_pair_truss_reductions(z4: FiniteHeap) -> None:
    plus = endo_pair_truss(z4, [0, 0, 0, 0], 0)
    np.testing.assert_array_equal(plus.mul_table, z4.add_table)

    left = endo_pair_truss(z4, [0, 1, 2, 3], 0, "first")
    assert left.mul_table.tolist() == [[x] * 4 for x in range(4)]


def test_endo_pair_truss_rejects(v4: FiniteHeap) -> None:
    with pytest.raises(NotInKernel) as e:
        endo_pair_truss(v4, [0, 0, 2, 2], 2)
    assert e.value.witness == (2,)

    with pytest.raises(NotAdditive) as e:
        endo_pair_truss(v4, [1, 1, 3, 3], 0)
    assert e.value.witness == (0, 0)

    with pytest.raises(NotIdempotent):
        endo_pair_truss(FiniteHeap.from_cyclic([3]), [0, 2, 1], 0)


@parametrize("shape, size", [([2], 4), ([3], 9), ([4], 16), ([2, 2], 64)])
def test_endomorphism_truss(shape: list[int], size: int) -> None:
    H = FiniteHeap.from_cyclic(shape)
    EH, labels = endomorphism_truss(H)
    assert EH.size == size == H.size * len(group_homomorphisms(H, H))
    assert len(labels) == size

    s = special_elements(EH)
    assert s.identity is not None
    np.testing.assert_array_equal(labels[s.identity].as_map(H), np.arange(H.size))

    constants = tuple(i for i, label in enumerate(labels) if not any(label.alpha))
    assert constants == s.left_absorbers


def test_endomorphism_truss_labels() -> None:
    _, labels = endomorphism_truss(FiniteHeap.from_cyclic([2]))
    assert [str(label) for label in labels] == ["(0;0)", "(0;1)", "(1;0)", "(1;1)"]


def test_endomorphism_truss_too_large() -> None:
    with pytest.raises(CarrierTooLarge):
        endomorphism_truss(FiniteHeap.from_cyclic([2, 2, 2]))


def test_semidirect_truss_on_z4(z4: FiniteHeap) -> None:
    product = semidirect_truss(z4, 0)
    T = product.truss
    assert T.size == 16

    s = special_elements(T)
    assert s.identity == 1
    assert product.labels[1].offset == 0
    assert product.labels[1].alpha == (0, 1, 2, 3)
    assert 0 in s.left_absorbers

    assert product.theta.is_valid
    assert product.theta.is_bijective

    slice_ = product.slice()
    assert len(slice_) == 4
    assert classify_subheap(T, slice_).subtruss


@parametrize("shape", [[2], [3], [2, 2]])
def test_semidirect_theta_is_isomorphism(shape: list[int]) -> None:
    H = FiniteHeap.from_cyclic(shape)
    for e in (0, H.size - 1):
        theta = semidirect_truss(H, e).theta
        assert theta.require().is_bijective
        roundtrip = theta.compose(theta.inverse())
        np.testing.assert_array_equal(roundtrip.image, np.arange(theta.codomain.size))


def test_theta_must_be_bijective() -> None:
    T4 = constant_truss(FiniteHeap.from_cyclic([4]), 0)
    T2 = constant_truss(FiniteHeap.from_cyclic([2]), 0)

    with pytest.raises(NotBijective) as e:
        _require_bijective(TrussMorphism(T4, T2, np.array([0, 1, 0, 1])).require())
    assert e.value.witness == (0, 2)

    with pytest.raises(NotBijective) as e:
        _require_bijective(TrussMorphism(T2, T4, np.array([0, 2])).require())
    assert e.value.witness == (1,)

    identity = TrussMorphism(T4, T4, np.arange(4))
    assert _require_bijective(identity) is identity


@parametrize("e, f", [(0, 1), (1, 3), (2, 0)])
def test_conjugation_between_basepoints(z4: FiniteHeap, e: int, f: int) -> None:
    phi = conjugation_map(z4, e, f)
    assert phi.require().is_bijective
    assert phi in truss_isomorphisms(phi.domain, phi.codomain)


def test_endomorphism_subtruss() -> None:
    H = FiniteHeap.from_cyclic([3])
    EH, labels = endomorphism_truss(H)
    S = endomorphism_subtruss(H, 0, EH)
    assert len(S) == 3
    assert all(labels[i].as_map(H)[0] == 0 for i in S)
    assert classify_subheap(EH, S).subtruss


def test_subset_semidirect_matches_endo_pair(v4: FiniteHeap) -> None:
    complement = [0, 1, 0, 1]  # id - α for α = (0, 0, 2, 2)
    T = subset_semidirect_truss(v4, [complement])
    expected = endo_pair_truss(v4, [0, 0, 2, 2], 0, "first")
    np.testing.assert_array_equal(T.mul_table, expected.mul_table)


def test_subset_semidirect_needs_closure(z4: FiniteHeap) -> None:
    with pytest.raises(NotClosed):
        subset_semidirect_truss(z4, [[0, 2, 0, 2]])


def test_mapping_truss() -> None:
    T = zn_truss(2, 1, 0, 0)
    assert mapping_truss(T, 1) == T
    square = mapping_truss(T, 2)
    assert square == T.product(T)
    assert special_elements(square).identity == 3

    with pytest.raises(CarrierTooLarge):
        mapping_truss(T, 8)


def test_mapping_truss_over_a_non_commutative_truss(v4: FiniteHeap) -> None:
    T = alpha_truss(v4, [0, 1, 0, 1], "first")
    square = mapping_truss(T, 2)
    assert square == T.product(T)
    assert not square.is_commutative


def test_matrix_truss() -> None:
    plus = matrix_truss(2, 2, [[1, 0], [0, 1]])
    np.testing.assert_array_equal(plus.mul_table, plus.heap.add_table)

    left = matrix_truss(2, 2, [[0, 0], [0, 0]])
    assert left.mul_table.tolist() == [[x] * 4 for x in range(4)]

    assert matrix_truss(4, 2, [[1, 0], [0, 0]]).size == 16

    with pytest.raises(NotIdempotentMatrix) as e:
        matrix_truss(2, 2, [[1, 1], [0, 1]])
    assert e.value.witness == (0, 1)
