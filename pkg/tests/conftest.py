from __future__ import annotations

from pytest_cases import fixture

from trusskit.heap import FiniteHeap
from trusskit.truss import FiniteTruss
from trusskit.ztruss import zn_truss

# V₄ as ℤ₂ × ℤ₂ numbered 0, a, b, a+b
V4_LABELS = ("0", "a", "b", "a+b")
V4_TABLE = [
    [1, 0, 1, 0],
    [0, 1, 0, 1],
    [3, 2, 3, 2],
    [2, 3, 2, 3],
]


@fixture
def v4() -> FiniteHeap:
    return FiniteHeap.from_cyclic([2, 2])


@fixture
def z4() -> FiniteHeap:
    return FiniteHeap.from_cyclic([4])


@fixture
def z4_ring() -> FiniteTruss:
    """The usual multiplication on ℤ₄."""
    return zn_truss(4, 1, 0, 0)


@fixture
def v4_table() -> list[list[int]]:
    return [list(row) for row in V4_TABLE]


@fixture
def v4_labels() -> tuple[str, ...]:
    return V4_LABELS
