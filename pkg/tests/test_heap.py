from __future__ import annotations

from itertools import permutations

import numpy as np
import pytest
from pytest_cases import parametrize

from trusskit.errors import (
    AxiomError,
    EmptyGenerator,
    EvenLength,
    IndexOutOfRange,
    NotAbelian,
    NotHeapMorphism,
    NotInImage,
    NotMalcev,
    NotSubHeap,
)
from trusskit.heap import (
    FiniteHeap,
    HeapMorphism,
    SubHeap,
    build_heap,
    check_heap_laws,
    check_morphism,
    congruence_relation,
    group_homomorphisms,
    heap_morphisms,
    is_normal,
    kernel,
    quotient_heap,
    subheap_generated,
    swap_automorphism,
)

# Every Abelian group of order at most 8, as products of cyclic groups
ABELIAN_UP_TO_8 = [[n] for n in range(1, 9)] + [[2, 2], [2, 4], [2, 2, 2]]


def test_bracket_is_x_minus_y_plus_z() -> None:
    z6 = FiniteHeap.from_cyclic([6])
    assert z6.bracket(1, 2, 3) == 2
    assert z6.bracket(0, 5, 0) == 1


def test_bracket_rejects_elements_outside_carrier(z4: FiniteHeap) -> None:
    with pytest.raises(IndexOutOfRange):
        z4.bracket(0, 1, 4)


def test_multibracket() -> None:
    z5 = FiniteHeap.from_cyclic([5])
    assert z5.multibracket([1, 2, 3, 4, 0]) == 3
    assert z5.multibracket([4]) == 4

    with pytest.raises(EvenLength):
        z5.multibracket([1, 2])


def test_klein_group_adds_by_xor(v4: FiniteHeap) -> None:
    expected = np.bitwise_xor.outer(np.arange(4), np.arange(4))
    np.testing.assert_array_equal(v4.add_table, expected)


def test_retract_and_scale() -> None:
    z6 = FiniteHeap.from_cyclic([6])
    retract = z6.retract(1)
    assert retract[3, 4] == 0  # 3 - 1 + 4
    assert z6.scale(-1, 2) == 4
    assert z6.scale(5, 1) == 5
    assert z6.scale(8, 1) == 2


def test_product_heap() -> None:
    H = FiniteHeap.from_cyclic([2]).product(FiniteHeap.from_cyclic([3]))
    assert H.size == 6
    assert H.factor_shape == (2, 3)
    assert H == FiniteHeap.from_cyclic([2, 3])


@parametrize("shape", ABELIAN_UP_TO_8)
def test_build_heap_accepts_every_bracket_table(shape: list[int]) -> None:
    H = FiniteHeap.from_cyclic(shape)
    assert build_heap(H.bracket_table) == H
    assert build_heap(H.add_table) == H


@parametrize("shape", ABELIAN_UP_TO_8)
def test_build_heap_rejects_every_single_cell_mutation(shape: list[int]) -> None:
    t = FiniteHeap.from_cyclic(shape).bracket_table
    n = t.shape[0]
    for index in np.ndindex(t.shape):
        mutated = t.copy()
        mutated[index] = (t[index] + 1) % n
        if n > 1:
            with pytest.raises(AxiomError):
                build_heap(mutated)


def test_build_heap_names_malcev_witness() -> None:
    t = FiniteHeap.from_cyclic([3]).bracket_table.copy()
    t[0, 0, 1] = 0
    with pytest.raises(NotMalcev) as e:
        build_heap(t)
    assert e.value.witness == (0, 0, 1)


def test_build_heap_rejects_non_abelian_group() -> None:
    perms = sorted(permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(p[q[i]] for i in range(3))] for q in perms] for p in perms]
    with pytest.raises(NotAbelian):
        build_heap(table)


@parametrize("shape", [[1], [2], [3], [4], [5], [2, 2]])
def test_heap_laws_hold_exhaustively(shape: list[int]) -> None:
    assert check_heap_laws(FiniteHeap.from_cyclic(shape)) is None


@parametrize("shape", [[64], [4, 4, 4], [2, 2, 2, 2, 2, 2], [7, 9]])
def test_heap_laws_hold_on_samples(shape: list[int]) -> None:
    H = FiniteHeap.from_cyclic(shape)
    assert check_heap_laws(H, exhaustive=False, samples=10_000) is None


def test_swap_automorphisms_are_mutually_inverse(z4: FiniteHeap) -> None:
    for e in z4:
        for f in z4:
            there = swap_automorphism(z4, e, f)
            back = swap_automorphism(z4, f, e)
            assert there(e) == f
            assert back.compose(there) == HeapMorphism.identity(z4)
            assert there.check().valid


def test_check_morphism_reports_least_witness(z4: FiniteHeap) -> None:
    square = HeapMorphism(z4, z4, [0, 1, 0, 1])
    report = check_morphism(square)
    assert not report
    assert report.witness == (0, 1, 0)

    with pytest.raises(NotHeapMorphism):
        square.require()


def test_morphism_properties(z4: FiniteHeap) -> None:
    mod2 = HeapMorphism(z4, FiniteHeap.from_cyclic([2]), [0, 1, 0, 1]).require()
    assert mod2.is_surjective
    assert not mod2.is_injective
    assert mod2.fibres() == [(0, 2), (1, 3)]

    tau = swap_automorphism(z4, 0, 1)
    assert tau.is_bijective
    assert tau.inverse() == swap_automorphism(z4, 1, 0)


def test_subheap_generated() -> None:
    z6 = FiniteHeap.from_cyclic([6])
    assert subheap_generated(z6, [1, 3]).members == (1, 3, 5)
    assert subheap_generated(z6, [4]).members == (4,)
    assert len(subheap_generated(z6, [0, 1])) == 6

    with pytest.raises(EmptyGenerator):
        subheap_generated(z6, [])


def test_coset_of_non_neutral_subgroup(v4: FiniteHeap) -> None:
    assert subheap_generated(v4, [1, 2]).members == (1, 2)


def test_subheap_rejects_unclosed_subset(z4: FiniteHeap) -> None:
    with pytest.raises(NotSubHeap) as e:
        SubHeap(z4, (0, 1))
    assert e.value.witness == (0, 1, 0)


@parametrize("shape, count", [([4], 7), ([2, 2], 11), ([6], 12), ([1], 1)])
def test_subheap_counts(shape: list[int], count: int) -> None:
    subheaps = FiniteHeap.from_cyclic(shape).subheaps()
    assert len(subheaps) == count
    assert subheaps == sorted(subheaps)
    assert all(is_normal(S) for S in subheaps)


def test_quotient_heap_and_kernel() -> None:
    z6 = FiniteHeap.from_cyclic([6])
    S = SubHeap(z6, (0, 3))
    Q, projection = quotient_heap(z6, S)
    assert Q == FiniteHeap.from_cyclic([3])
    assert projection.image.tolist() == [0, 1, 2, 0, 1, 2]
    assert kernel(projection, 0) == S
    assert kernel(projection, 1).members == (1, 4)


def test_kernel_outside_image(z4: FiniteHeap) -> None:
    constant = HeapMorphism.constant(z4, z4, 2)
    with pytest.raises(NotInImage):
        kernel(constant, 0)


def test_congruence_relation_is_subheap_of_square() -> None:
    z6 = FiniteHeap.from_cyclic([6])
    relation = congruence_relation(SubHeap(z6, (0, 3)))
    assert relation.parent.size == 36
    assert len(relation) == 12
    assert 0 * 6 + 3 in relation
    assert 0 * 6 + 1 not in relation


@parametrize(
    "domain, codomain, count",
    [([4], [4], 4), ([2, 2], [2, 2], 16), ([2], [3], 1), ([6], [3], 3)],
)
def test_group_homomorphism_counts(
    domain: list[int],
    codomain: list[int],
    count: int,
) -> None:
    G, H = FiniteHeap.from_cyclic(domain), FiniteHeap.from_cyclic(codomain)
    homs = group_homomorphisms(G, H)
    assert len(homs) == count
    assert all(phi(0) == 0 and phi.check().valid for phi in homs)
    assert len(heap_morphisms(G, H)) == count * H.size
