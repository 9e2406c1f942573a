"""Finite Abelian heaps.

A heap is stored through its retract group at the basepoint `0`, the table
`x ⋄ y = [x, 0, y]`. Every other piece of structure, the ternary bracket
`[x, y, z] = x ⋄ inv(y) ⋄ z`, the retracts at other points and the swap
automorphisms, is derived from that table.

```python
from trusskit.heap import FiniteHeap, build_heap

z6 = FiniteHeap.from_cyclic([6])
assert z6.bracket(1, 2, 3) == 2

# Raw ternary tables are validated against their own retract
h = build_heap(z6.bracket_table)
```
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import product as cartesian
from math import prod
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from trusskit.config import get_settings
from trusskit.errors import (
    CarrierTooLarge,
    EmptyGenerator,
    EvenLength,
    Inconsistent,
    IndexOutOfRange,
    NotAbelian,
    NotAGroup,
    NotClosed,
    NotHeapMorphism,
    NotInImage,
    NotMalcev,
    NotSubHeap,
    ParseError,
    check_index,
)
from trusskit.util import closure, first_failure, frozen, pairs

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FiniteHeap:
    """An Abelian heap on the carrier `0..n-1`.

    Construct validated heaps with [`build_heap()`][trusskit.heap.build_heap],
    the constructor itself trusts its table.
    """

    add_table: np.ndarray
    """The retract group `x ⋄ y = [x, 0, y]`, with neutral element `0`."""

    factor_shape: tuple[int, ...] | None = None
    """The cyclic orders when built as a product of cyclic groups."""

    def __post_init__(self) -> None:
        table = frozen(self.add_table)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] < 1:
            raise ParseError(f"An add table must be square, got shape {table.shape}")

        n = table.shape[0]
        cap = get_settings().max_carrier
        if n > cap:
            raise CarrierTooLarge(f"Carrier of size {n} exceeds max_carrier={cap}")

        if self.factor_shape is not None:
            shape = tuple(int(s) for s in self.factor_shape)
            if prod(shape) != n:
                raise ValueError(f"factor_shape {shape} does not multiply to {n}")
            object.__setattr__(self, "factor_shape", shape)

        object.__setattr__(self, "add_table", table)

    @classmethod
    def from_cyclic(cls, shape: Sequence[int]) -> FiniteHeap:
        """The heap of `ℤ_{n1} × ... × ℤ_{ng}`, elements numbered in C order."""
        shape = tuple(int(s) for s in shape)
        if not shape or any(s < 1 for s in shape):
            raise ValueError(f"Cyclic orders must be positive, got {shape}")

        n = prod(shape)
        cap = get_settings().max_carrier
        if n > cap:
            raise CarrierTooLarge(f"Carrier of size {n} exceeds max_carrier={cap}")

        digits = np.stack(np.unravel_index(np.arange(n), shape), axis=-1)
        sums = (digits[:, None, :] + digits[None, :, :]) % np.array(shape)
        table = np.ravel_multi_index(tuple(np.moveaxis(sums, -1, 0)), shape)
        return cls(table, factor_shape=shape)

    @property
    def size(self) -> int:
        """The number of elements."""
        return int(self.add_table.shape[0])

    @property
    def elements(self) -> range:
        """The carrier `0..n-1`."""
        return range(self.size)

    def __len__(self) -> int:
        return self.size

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteHeap):
            return NotImplemented
        return np.array_equal(self.add_table, other.add_table)

    def __hash__(self) -> int:
        return hash(self.add_table.tobytes())

    def __repr__(self) -> str:
        shape = f", factor_shape={self.factor_shape}" if self.factor_shape else ""
        return f"FiniteHeap(n={self.size}{shape})"

    @cached_property
    def neg(self) -> np.ndarray:
        """The inverse of each element in the retract at 0."""
        return frozen(np.argmax(self.add_table == 0, axis=1))

    @cached_property
    def bracket_table(self) -> np.ndarray:
        """The full ternary table, `bracket_table[x, y, z] = [x, y, z]`."""
        return frozen(self.add_table[self.add_table[:, self.neg]])

    @cached_property
    def orders(self) -> np.ndarray:
        """The additive order of each element."""
        orders = np.zeros(self.size, dtype=np.int64)
        current = np.arange(self.size)
        k = 1
        while (orders == 0).any():
            orders[(current == 0) & (orders == 0)] = k
            current = self.add_table[current, np.arange(self.size)]
            k += 1
        return frozen(orders)

    def bracket(self, x: int, y: int, z: int) -> int:
        """The ternary operation `[x, y, z] = x - y + z`."""
        check_index(self.size, x, y, z)
        return int(self.bracket_table[x, y, z])

    def multibracket(self, items: Sequence[int]) -> int:
        """The left nested bracket `[[...[[x1, x2, x3], x4, x5]...]]`.

        Args:
            items: An odd number of elements

        Returns:
            The alternating sum `x1 - x2 + x3 - ... + x_{2k+1}`
        """
        if len(items) % 2 == 0:
            raise EvenLength(f"Multibracket of {len(items)} items, need an odd number")

        check_index(self.size, *items)
        acc = int(items[0])
        for y, z in zip(items[1::2], items[2::2]):
            acc = int(self.bracket_table[acc, y, z])
        return acc

    def retract(self, e: int) -> np.ndarray:
        """The group table of `x +_e y = [x, e, y]`."""
        check_index(self.size, e)
        return frozen(self.bracket_table[:, e, :])

    def multiples(self, x: int, count: int) -> np.ndarray:
        """The array `[0, x, 2x, ..., (count-1)x]` in the retract at 0."""
        out = np.zeros(max(count, 1), dtype=np.int64)
        for k in range(1, count):
            out[k] = self.add_table[out[k - 1], x]
        return out[:count]

    def scale(self, k: int, x: int) -> int:
        """The integer multiple `k·x` in the retract at 0, `k` may be negative."""
        check_index(self.size, x)
        if k < 0:
            k, x = -k, int(self.neg[x])
        k %= int(self.orders[x])
        return int(self.multiples(x, k + 1)[k])

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """A generating set of the retract at 0.

        For products of cyclic groups these are the unit vectors of the non-trivial
        factors, otherwise a greedy choice in ascending order.
        """
        if self.factor_shape is not None:
            shape = self.factor_shape
            strides = [prod(shape[i + 1 :]) for i in range(len(shape))]
            return tuple(stride for stride, s in zip(strides, shape) if s > 1)

        gens: list[int] = []
        span: tuple[int, ...] = (0,)
        for x in self.elements:
            if x not in span:
                gens.append(x)
                span = self.subgroup(gens)
        return tuple(gens)

    @cached_property
    def coefficients(self) -> np.ndarray:
        """Row `x` holds non-negative `c` with `x = Σ c_i·g_i` over the generators."""
        gens = self.generators
        coef = np.zeros((self.size, len(gens)), dtype=np.int64)
        seen = np.zeros(self.size, dtype=bool)
        seen[0] = True
        queue = [0]
        for x in queue:
            for i, g in enumerate(gens):
                y = int(self.add_table[x, g])
                if not seen[y]:
                    seen[y] = True
                    coef[y] = coef[x]
                    coef[y, i] += 1
                    queue.append(y)
        return frozen(coef)

    def subgroup(self, X: Iterable[int]) -> tuple[int, ...]:
        """The subgroup of the retract at 0 generated by `X`."""
        table = self.add_table
        return closure([0, *X], lambda m: table[np.ix_(m, m)])

    @cached_property
    def subgroups(self) -> tuple[tuple[int, ...], ...]:
        """Every subgroup of the retract at 0, sorted."""
        found = {self.subgroup([x]) for x in self.elements}
        frontier = set(found)
        while frontier:
            joins = {
                self.subgroup(a + b) for a in frontier for b in found if a != b
            } - found
            found |= joins
            frontier = joins
        return tuple(sorted(found))

    def subheaps(self) -> list[SubHeap]:
        """Every sub-heap, i.e. every coset of every subgroup, sorted by members."""
        cosets = {
            tuple(sorted({int(self.add_table[x, s]) for s in group}))
            for group in self.subgroups
            for x in self.elements
        }
        return [SubHeap(self, members) for members in sorted(cosets)]

    def product(self, other: FiniteHeap) -> FiniteHeap:
        """The direct product, the pair `(h, k)` is numbered `h·|other| + k`."""
        n1, n2 = self.size, other.size
        A, B = self.add_table, other.add_table
        table = A[:, None, :, None] * n2 + B[None, :, None, :]
        shape = None
        if self.factor_shape is not None and other.factor_shape is not None:
            shape = self.factor_shape + other.factor_shape
        return FiniteHeap(table.reshape(n1 * n2, n1 * n2), factor_shape=shape)


@dataclass(frozen=True)
class MorphismReport:
    """The outcome of [`check_morphism()`][trusskit.heap.check_morphism]."""

    valid: bool
    witness: tuple[int, int, int] | None = None
    """The least triple `(x, y, z)` with `φ[x,y,z] != [φx,φy,φz]`."""

    def __bool__(self) -> bool:
        return self.valid


@dataclass(frozen=True, eq=False)
class HeapMorphism:
    """A map between heaps, given by the image of each element.

    Construction does not validate, see [`check()`][trusskit.heap.HeapMorphism.check].
    """

    domain: FiniteHeap
    codomain: FiniteHeap
    image: np.ndarray

    def __post_init__(self) -> None:
        image = frozen(self.image)
        if image.shape != (self.domain.size,):
            raise ValueError(
                f"Image of length {image.shape} for domain of size {self.domain.size}",
            )
        check_index(self.codomain.size, *image)
        object.__setattr__(self, "image", image)

    @classmethod
    def identity(cls, H: FiniteHeap) -> HeapMorphism:
        return cls(H, H, np.arange(H.size))

    @classmethod
    def constant(
        cls, domain: FiniteHeap, codomain: FiniteHeap, c: int
    ) -> HeapMorphism:
        return cls(domain, codomain, np.full(domain.size, c))

    def __call__(self, x: int) -> int:
        check_index(self.domain.size, x)
        return int(self.image[x])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HeapMorphism):
            return NotImplemented
        return (
            self.domain == other.domain
            and self.codomain == other.codomain
            and np.array_equal(self.image, other.image)
        )

    def __hash__(self) -> int:
        return hash(self.image.tobytes())

    def __repr__(self) -> str:
        return f"HeapMorphism({tuple(int(i) for i in self.image)})"

    def check(self) -> MorphismReport:
        return check_morphism(self)

    def require(self) -> HeapMorphism:
        """Return self, raising NotHeapMorphism if the bracket is not preserved."""
        report = check_morphism(self)
        if not report.valid:
            raise NotHeapMorphism(report.witness or ())
        return self

    def compose(self, first: HeapMorphism) -> HeapMorphism:
        """`self ∘ first`, apply `first` then self."""
        if first.codomain != self.domain:
            raise ValueError("The first map must land in the domain of the second")
        return HeapMorphism(first.domain, self.codomain, self.image[first.image])

    @property
    def is_injective(self) -> bool:
        return len(np.unique(self.image)) == self.domain.size

    @property
    def is_surjective(self) -> bool:
        return len(np.unique(self.image)) == self.codomain.size

    @property
    def is_bijective(self) -> bool:
        return self.is_injective and self.is_surjective

    def inverse(self) -> HeapMorphism:
        if not self.is_bijective:
            raise ValueError(f"{self} is not a bijection")
        return HeapMorphism(self.codomain, self.domain, np.argsort(self.image))

    def fibres(self) -> list[tuple[int, ...]]:
        """The pre-image of each codomain element, indexed by that element."""
        return [
            tuple(int(x) for x in np.flatnonzero(self.image == y))
            for y in self.codomain.elements
        ]


@dataclass(frozen=True, eq=False)
class SubHeap:
    """A non-empty subset of a heap closed under the bracket.

    Use [`SubHeap.of()`][trusskit.heap.SubHeap.of] for unsorted input.
    """

    parent: FiniteHeap
    members: tuple[int, ...]
    """Strictly increasing element indices."""

    def __post_init__(self) -> None:
        members = tuple(int(m) for m in self.members)
        if not members:
            raise EmptyGenerator("A sub-heap must be non-empty")
        check_index(self.parent.size, *members)
        if any(a >= b for a, b in pairs(members)):
            raise ValueError(f"Members must be strictly increasing, got {members}")
        object.__setattr__(self, "members", members)

        m = np.array(members)
        inside = self.mask[self.parent.bracket_table[np.ix_(m, m, m)]]
        witness = first_failure(inside)
        if witness is not None:
            raise NotSubHeap(tuple(members[i] for i in witness))

    @classmethod
    def of(cls, parent: FiniteHeap, members: Iterable[int]) -> SubHeap:
        return cls(parent, tuple(sorted({int(m) for m in members})))

    @cached_property
    def mask(self) -> np.ndarray:
        """Boolean membership over the parent carrier."""
        mask = np.zeros(self.parent.size, dtype=bool)
        mask[list(self.members)] = True
        mask.setflags(write=False)
        return mask

    @cached_property
    def positions(self) -> np.ndarray:
        """Position of each parent element in `members`, `-1` outside."""
        index = np.full(self.parent.size, -1, dtype=np.int64)
        index[list(self.members)] = np.arange(len(self.members))
        index.setflags(write=False)
        return index

    def as_heap(self) -> FiniteHeap:
        """The sub-heap on its own carrier, member `i` renumbered as `i`.

        The retract is taken at `members[0]`, which becomes the new `0`.
        """
        m = np.array(self.members)
        t = self.parent.bracket_table
        return FiniteHeap(self.positions[t[m[:, None], m[0], m[None, :]]])

    def __contains__(self, x: object) -> bool:
        return x in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SubHeap):
            return NotImplemented
        return self.members == other.members and self.parent == other.parent

    def __lt__(self, other: SubHeap) -> bool:
        return self.members < other.members

    def __hash__(self) -> int:
        return hash(self.members)

    def __repr__(self) -> str:
        return f"SubHeap({set(self.members)})"


def build_heap(
    source: Sequence[int] | Sequence[Sequence[int]] | np.ndarray,
) -> FiniteHeap:
    """Build a validated heap.

    Args:
        source: One of

            * a flat list of cyclic orders, `[2, 2]` for the Klein group
            * an `n×n` Abelian group table with neutral element `0`
            * an `n×n×n` table of the ternary operation

    Returns:
        The heap, stored through its retract at 0
    """
    arr = np.asarray(source, dtype=np.int64)
    if arr.ndim == 1:
        return FiniteHeap.from_cyclic(arr.tolist())
    if arr.ndim == 2:
        _validate_group(arr)
        return FiniteHeap(arr)
    if arr.ndim == 3:
        return _from_ternary(arr)

    raise ParseError(f"Cannot build a heap from an array of shape {arr.shape}")


def _check_total(arr: np.ndarray) -> int:
    n = arr.shape[0]
    if n < 1 or any(s != n for s in arr.shape):
        raise ParseError(f"Table of shape {arr.shape} is not total over a carrier")
    if arr.min() < 0 or arr.max() >= n:
        raise IndexOutOfRange(f"Table entries must lie in 0..{n - 1}")
    return n


def _validate_group(g: np.ndarray) -> None:
    n = _check_total(g)
    ar = np.arange(n)

    neutral = np.stack([g[0] == ar, g[:, 0] == ar])
    witness = first_failure(neutral)
    if witness is not None:
        raise NotAGroup((witness[1],), "0 is not the neutral element")

    rows = (np.sort(g, axis=1) == ar).all(axis=1)
    cols = (np.sort(g, axis=0) == ar[:, None]).all(axis=0)
    witness = first_failure(rows & cols)
    if witness is not None:
        raise NotAGroup(witness, "element has no inverse")

    witness = first_failure(g[g] == g[:, g])
    if witness is not None:
        raise NotAGroup(witness, "not associative")

    witness = first_failure(g == g.T)
    if witness is not None:
        raise NotAbelian(witness)


def _from_ternary(t: np.ndarray) -> FiniteHeap:
    n = _check_total(t)
    ar = np.arange(n)

    left = t[ar, ar, :] == ar[None, :]  # [x, x, y] at (x, y)
    right = t[:, ar, ar] == ar[:, None]  # [y, x, x] at (y, x)
    witnesses = []
    if (w := first_failure(left)) is not None:
        witnesses.append((w[0], w[0], w[1]))
    if (w := first_failure(right)) is not None:
        witnesses.append((w[0], w[1], w[1]))
    if witnesses:
        raise NotMalcev(min(witnesses))

    witness = first_failure(t == t.transpose(2, 1, 0))
    if witness is not None:
        raise NotAbelian(witness)

    g = np.ascontiguousarray(t[:, 0, :])
    _validate_group(g)

    heap = FiniteHeap(g)
    witness = first_failure(t == heap.bracket_table)
    if witness is not None:
        raise Inconsistent(witness)
    return heap


def swap_automorphism(H: FiniteHeap, e: int, f: int) -> HeapMorphism:
    """The automorphism `τ_e^f: x ↦ [x, e, f]`, with inverse `τ_f^e`."""
    check_index(H.size, e, f)
    return HeapMorphism(H, H, H.bracket_table[:, e, f])


def check_morphism(phi: HeapMorphism) -> MorphismReport:
    """Check that `phi` preserves the bracket.

    Since `[x, y, z] = [[x, y, 0], 0, z]` it is enough to check the two families
    `[x, y, 0]` and `[x, 0, z]`, each an `n²` scan.
    """
    D, C, f = phi.domain, phi.codomain, phi.image
    f0 = f[0]

    lhs = f[D.bracket_table[:, :, 0]]
    rhs = C.bracket_table[f[:, None], f[None, :], f0]
    w1 = first_failure(lhs == rhs)

    lhs = f[D.bracket_table[:, 0, :]]
    rhs = C.bracket_table[f[:, None], f0, f[None, :]]
    w2 = first_failure(lhs == rhs)

    candidates = []
    if w1 is not None:
        candidates.append((w1[0], w1[1], 0))
    if w2 is not None:
        candidates.append((w2[0], 0, w2[1]))
    if not candidates:
        return MorphismReport(valid=True)
    return MorphismReport(valid=False, witness=min(candidates))


def preserving_rows(
    maps: np.ndarray,
    domain: FiniteHeap,
    codomain: FiniteHeap,
) -> np.ndarray:
    """Which rows of `maps`, each a map `domain → codomain`, preserve the bracket.

    The two scans of [`check_morphism()`][trusskit.heap.check_morphism] run on all
    rows at once.
    """
    td, tc = domain.bracket_table, codomain.bracket_table
    f0 = maps[:, 0][:, None, None]
    ok = maps[:, td[:, :, 0]] == tc[maps[:, :, None], maps[:, None, :], f0]
    ok &= maps[:, td[:, 0, :]] == tc[maps[:, :, None], f0, maps[:, None, :]]
    return ok.all(axis=(1, 2))


def bracket_witness(
    f: np.ndarray,
    domain: FiniteHeap,
    codomain: FiniteHeap,
) -> tuple[int, ...] | None:
    """The least `(x, y, z)` with `f[x, y, z] != [fx, fy, fz]`, or None."""
    lhs = f[domain.bracket_table]
    rhs = codomain.bracket_table[f[:, None, None], f[None, :, None], f[None, None, :]]
    return first_failure(lhs == rhs)


def subheap_generated(H: FiniteHeap, X: Iterable[int]) -> SubHeap:
    """The smallest sub-heap containing `X`."""
    X = list(X)
    if not X:
        raise EmptyGenerator("The sub-heap generated by the empty set is not modelled")
    check_index(H.size, *X)
    t = H.bracket_table
    return SubHeap(H, closure(X, lambda m: t[np.ix_(m, m, m)]))


def is_normal(S: SubHeap) -> bool:
    """Whether `[[x, e, s], x, e] ∈ S` for `e = min(S)`, every `x` and `s ∈ S`."""
    H = S.parent
    t = H.bracket_table
    e = S.members[0]
    s = np.array(S.members)
    x = np.arange(H.size)[:, None]
    inner = t[x, e, s[None, :]]
    return bool(S.mask[t[inner, x, e]].all())


def quotient_heap(H: FiniteHeap, S: SubHeap) -> tuple[FiniteHeap, HeapMorphism]:
    """The quotient `H/S` by the relation `x ~ y ⇔ [x, y, s] ∈ S`.

    Classes are numbered by their least member, so the class of `0` is `0`.

    Returns:
        The quotient heap and the projection onto it
    """
    if S.parent != H:
        raise NotSubHeap((), "Sub-heap belongs to a different heap")

    t = H.bracket_table
    s0 = S.members[0]
    # The class of x is {[x, s0, s] : s ∈ S}
    reps = t[:, s0, list(S.members)].min(axis=1)
    unique_reps = np.unique(reps)
    class_of = np.searchsorted(unique_reps, reps)

    table = class_of[H.add_table[np.ix_(unique_reps, unique_reps)]]
    quotient = FiniteHeap(table)
    return quotient, HeapMorphism(H, quotient, class_of)


def kernel(phi: HeapMorphism, e: int) -> SubHeap:
    """The `e`-kernel, the pre-image of `e` under `phi`."""
    check_index(phi.codomain.size, e)
    members = np.flatnonzero(phi.image == e)
    if len(members) == 0:
        raise NotInImage((e,))
    return SubHeap(phi.domain, tuple(int(m) for m in members))


def congruence_relation(S: SubHeap) -> SubHeap:
    """The relation `~_S` as a sub-heap of `H × H`."""
    H = S.parent
    _, projection = quotient_heap(H, S)
    c = projection.image
    pairs_ = [x * H.size + y for x in H.elements for y in H.elements if c[x] == c[y]]
    return SubHeap(H.product(H), tuple(pairs_))


def group_homomorphisms(G: FiniteHeap, H: FiniteHeap) -> list[HeapMorphism]:
    """Every group homomorphism between the retracts at 0.

    A homomorphism is fixed by the images of the generators of `G`, and the image
    of a generator of order `k` must have order dividing `k`. Candidates are
    built from those images and kept when additive.

    Returns:
        The homomorphisms, ordered by the tuple of generator images
    """
    gens = G.generators
    coef = G.coefficients
    candidates = [
        [y for y in H.elements if int(G.orders[g]) % int(H.orders[y]) == 0]
        for g in gens
    ]

    homs = []
    for images in cartesian(*candidates):
        img = np.zeros(G.size, dtype=np.int64)
        for i, y in enumerate(images):
            multiples = H.multiples(y, int(G.orders[gens[i]]))
            img = H.add_table[img, multiples[coef[:, i]]]

        if (img[G.add_table] == H.add_table[img[:, None], img[None, :]]).all():
            homs.append(HeapMorphism(G, H, img))

    logger.debug(f"{len(homs)} group homomorphisms from {G} to {H}")
    return homs


def heap_morphisms(G: FiniteHeap, H: FiniteHeap) -> list[HeapMorphism]:
    """Every heap morphism, each written uniquely as `h ↦ x ⋄ α(h)`.

    Returns:
        The morphisms, ordered by `x` then by `α` as in
        [`group_homomorphisms()`][trusskit.heap.group_homomorphisms]
    """
    homs = group_homomorphisms(G, H)
    return [
        HeapMorphism(G, H, H.add_table[x][alpha.image])
        for x in H.elements
        for alpha in homs
    ]


def encode_maps(maps: np.ndarray, n: int) -> np.ndarray:
    """Each row of `maps`, values in `0..n-1`, read as a base-`n` integer."""
    weights = n ** np.arange(maps.shape[-1] - 1, -1, -1, dtype=np.int64)
    return maps @ weights


def locate(codes: np.ndarray, known: np.ndarray) -> np.ndarray:
    """Position of each code in `known`, `-1` where absent."""
    order = np.argsort(known)
    pos = np.clip(np.searchsorted(known, codes, sorter=order), 0, len(known) - 1)
    idx = order[pos]
    return np.where(known[idx] == codes, idx, -1)


def pointwise_heap(maps: np.ndarray, codomain: FiniteHeap) -> FiniteHeap:
    """The heap of the rows of `maps` under the pointwise bracket, based at row 0.

    Raises:
        NotClosed: if the bracket of three rows is not a row
    """
    t = codomain.bracket_table
    known = encode_maps(maps, codomain.size)
    brackets = t[maps[:, None, :], maps[0][None, None, :], maps[None, :, :]]
    add = locate(encode_maps(brackets, codomain.size), known)
    witness = first_failure(add >= 0)
    if witness is not None:
        i, j = witness
        raise NotClosed((i, 0, j), "pointwise bracket leaves the set of maps")
    return FiniteHeap(add)


def _law_checks(t: np.ndarray) -> dict[str, tuple[int, Callable[..., np.ndarray]]]:
    def b(x: np.ndarray, y: np.ndarray, z: np.ndarray) -> np.ndarray:
        return t[x, y, z]

    return {
        "malcev": (2, lambda x, y: (b(x, x, y) == y) & (b(y, x, x) == y)),
        "symmetry": (3, lambda x, y, z: b(x, y, z) == b(z, y, x)),
        "solvability": (3, lambda x, y, z: b(b(x, y, z), z, y) == x),
        "para_associativity": (
            5,
            lambda v, w, x, y, z: b(v, w, b(x, y, z)) == b(b(v, w, x), y, z),
        ),
        "inner_swap": (
            5,
            lambda v, w, x, y, z: b(v, w, b(x, y, z)) == b(v, b(y, x, w), z),
        ),
        "interchange": (
            9,
            lambda x1, x2, x3, y1, y2, y3, z1, z2, z3: b(
                b(x1, x2, x3),
                b(y1, y2, y3),
                b(z1, z2, z3),
            )
            == b(b(x1, y1, z1), b(x2, y2, z2), b(x3, y3, z3)),
        ),
    }


def check_heap_laws(
    H: FiniteHeap,
    *,
    exhaustive: bool | None = None,
    samples: int | None = None,
    seed: int | None = None,
) -> tuple[str, tuple[int, ...]] | None:
    """Check the derived heap identities directly on the ternary table.

    Args:
        H: The heap to check
        exhaustive: Check every tuple. Defaults to True for carriers of size 5 or
            less, where the nine element interchange law still fits in memory
        samples: Number of random tuples per law when not exhaustive, defaults to
            the configured `sample_size`
        seed: The seed for sampling, defaults to the configured seed

    Returns:
        The name of the first failing law and its witness, or None
    """
    settings = get_settings()
    n = H.size
    if exhaustive is None:
        exhaustive = n <= 5
    samples = samples if samples is not None else settings.sample_size
    rng = np.random.default_rng(settings.seed if seed is None else seed)

    for name, (arity, law) in _law_checks(H.bracket_table).items():
        if exhaustive:
            args = np.indices((n,) * arity, dtype=np.int8).reshape(arity, -1)
        else:
            args = rng.integers(0, n, size=(arity, samples))

        witness = first_failure(law(*args))
        if witness is not None:
            return name, tuple(int(a) for a in args[:, witness[0]])

    return None
