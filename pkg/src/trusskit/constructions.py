"""Trusses built from heaps, endomorphisms, matrices and other trusses.

All constructions return validated [`FiniteTruss`][trusskit.truss.FiniteTruss]
objects. Maps `H → H` are handled as rows of an integer array and looked up by
their base-`|H|` code, which fixes the numbering of carriers made of maps.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence
from typing_extensions import Literal

import numpy as np

from trusskit.config import get_settings
from trusskit.errors import (
    CarrierTooLarge,
    NotAdditive,
    NotBijective,
    NotClosed,
    NotEndomorphism,
    NotIdempotent,
    NotIdempotentMatrix,
    NotInKernel,
    check_index,
)
from trusskit.heap import (
    FiniteHeap,
    HeapMorphism,
    SubHeap,
    encode_maps,
    group_homomorphisms,
    locate,
    pointwise_heap,
)
from trusskit.truss import FiniteTruss, TrussMorphism, build_truss, restrict
from trusskit.util import first_failure

logger = logging.getLogger(__name__)

Variant = Literal["first", "second"]


@dataclass(frozen=True, order=True)
class EndoElement:
    """The heap endomorphism `h ↦ offset ⋄ α(h)` of a heap `H`.

    Ordered by `offset`, then by the images of the generators of `H` under `α`.
    """

    offset: int
    generator_images: tuple[int, ...]
    alpha: tuple[int, ...] = field(compare=False)
    """The full image of the group endomorphism `α`."""

    def __str__(self) -> str:
        images = ",".join(str(i) for i in self.generator_images)
        return f"({self.offset};{images})"

    def as_map(self, H: FiniteHeap) -> np.ndarray:
        """The image of every element of `H`."""
        return H.add_table[self.offset][np.array(self.alpha)]


def _composition_table(maps: np.ndarray, H: FiniteHeap) -> np.ndarray:
    """`table[i, j]` is the row of `maps[i] ∘ maps[j]`."""
    N = len(maps)
    composed = maps[np.arange(N)[:, None, None], maps[None, :, :]]
    table = locate(encode_maps(composed, H.size), encode_maps(maps, H.size))
    witness = first_failure(table >= 0)
    if witness is not None:
        raise NotClosed(witness, "composition leaves the set of maps")
    return table


def idempotent_endomorphism(
    H: FiniteHeap,
    alpha: Sequence[int] | np.ndarray,
) -> np.ndarray:
    """The image of `α`, checked to be an idempotent heap endomorphism.

    Raises:
        NotEndomorphism: with the least `(x, y, z)` whose bracket is not preserved
        NotIdempotent: with the least `x` where `α(α(x)) != α(x)`
    """
    phi = HeapMorphism(H, H, np.asarray(alpha))
    report = phi.check()
    if not report.valid:
        raise NotEndomorphism(report.witness or ())
    _require_idempotent(phi.image)
    return phi.image


def _require_idempotent(alpha: np.ndarray) -> None:
    witness = first_failure(alpha[alpha] == alpha)
    if witness is not None:
        raise NotIdempotent(witness)


def _require_additive(G: FiniteHeap, alpha: np.ndarray) -> None:
    witness = first_failure(alpha[G.add_table] == G.add_table[np.ix_(alpha, alpha)])
    if witness is not None:
        raise NotAdditive(witness)


def constant_truss(H: FiniteHeap, e: int) -> FiniteTruss:
    """The truss with every product equal to `e`, which absorbs everything."""
    check_index(H.size, e)
    return build_truss(H, np.full((H.size, H.size), e))


def alpha_truss(
    H: FiniteHeap,
    alpha: Sequence[int] | np.ndarray,
    variant: Variant = "first",
) -> FiniteTruss:
    """The truss of an idempotent heap endomorphism `α`.

    Args:
        H: The heap
        alpha: The image of each element under `α`
        variant: `"first"` for `xy = [x, α(x), y]`, `"second"` for
            `xy = [x, α(y), y]`, the opposite of the first

    Returns:
        The truss
    """
    a = idempotent_endomorphism(H, alpha)
    t = H.bracket_table
    ar = np.arange(H.size)
    if variant == "first":
        mul = t[ar[:, None], a[:, None], ar[None, :]]
    elif variant == "second":
        mul = t[ar[:, None], a[None, :], ar[None, :]]
    else:
        raise ValueError(f"variant must be 'first' or 'second', got {variant!r}")
    return build_truss(H, mul)


def endo_pair_truss(
    G: FiniteHeap,
    alpha: Sequence[int] | np.ndarray,
    a: int,
    variant: Variant = "first",
) -> FiniteTruss:
    """The truss on the heap of `(G, +)` from an idempotent `α` and `a ∈ ker α`.

    Args:
        G: The group, as the retract at 0 of a heap
        alpha: An idempotent group endomorphism, by images
        a: An element with `α(a) = 0`
        variant: `"first"` for `xy = x + y - α(y) - a`, `"second"` for
            `xy = x + y - α(x) - a`

    Returns:
        The truss
    """
    al = np.asarray(alpha, dtype=np.int64)
    HeapMorphism(G, G, al)
    _require_additive(G, al)
    _require_idempotent(al)
    check_index(G.size, a)
    if al[a] != 0:
        raise NotInKernel((a,))

    A, neg = G.add_table, G.neg
    shift = neg[A[al, a]]  # -(α(z) + a) for each z
    if variant == "first":
        mul = A[A, shift[None, :]]
    elif variant == "second":
        mul = A[A, shift[:, None]]
    else:
        raise ValueError(f"variant must be 'first' or 'second', got {variant!r}")
    return build_truss(G, mul)


def _endomorphism_maps(H: FiniteHeap) -> tuple[np.ndarray, list[EndoElement]]:
    homs = group_homomorphisms(H, H)
    cap = get_settings().enumeration_cap
    size = H.size * len(homs)
    if size > cap**2:
        raise CarrierTooLarge(f"|E(H)| = {size} exceeds enumeration_cap² = {cap**2}")

    gens = H.generators
    labels = [
        EndoElement(
            offset=x,
            generator_images=tuple(int(alpha.image[g]) for g in gens),
            alpha=tuple(int(i) for i in alpha.image),
        )
        for x in H.elements
        for alpha in homs
    ]
    maps = np.array([label.as_map(H) for label in labels])
    return maps, labels


def endomorphism_truss(H: FiniteHeap) -> tuple[FiniteTruss, list[EndoElement]]:
    """The truss `E(H)` of all heap endomorphisms of `H`.

    The bracket is pointwise and the product is composition, `(fg)(h) = f(g(h))`.
    Element `i` is the map labelled `labels[i]`.

    Returns:
        The truss and the label of each element
    """
    maps, labels = _endomorphism_maps(H)
    heap = pointwise_heap(maps, H)
    truss = build_truss(heap, _composition_table(maps, H))
    logger.info(f"E({H}) has {truss.size} elements")
    return truss, labels


def endomorphism_subtruss(
    H: FiniteHeap,
    e: int,
    EH: FiniteTruss | None = None,
) -> SubHeap:
    """The endomorphisms fixing `e` inside E(H), those of the group `(H, +_e)`."""
    check_index(H.size, e)
    maps, _ = _endomorphism_maps(H)
    if EH is None:
        EH, _ = endomorphism_truss(H)
    return SubHeap(EH.heap, tuple(int(i) for i in np.flatnonzero(maps[:, e] == e)))


def conjugation_map(H: FiniteHeap, e: int, f: int) -> TrussMorphism:
    """The isomorphism `α ↦ τ_e^f ∘ α ∘ τ_f^e` of the sub-trusses at `e` and `f`."""
    EH, _ = endomorphism_truss(H)
    maps, _ = _endomorphism_maps(H)
    Se = endomorphism_subtruss(H, e, EH)
    Sf = endomorphism_subtruss(H, f, EH)
    Te, _ = restrict(EH, Se)
    Tf, _ = restrict(EH, Sf)

    t = H.bracket_table
    conjugated = t[maps[list(Se.members)][:, t[:, f, e]], e, f]
    targets = encode_maps(maps[list(Sf.members)], H.size)
    image = locate(encode_maps(conjugated, H.size), targets)
    return TrussMorphism(Te, Tf, image)


def _require_bijective(phi: TrussMorphism) -> TrussMorphism:
    f = phi.image
    order = np.argsort(f, kind="stable")
    clash = first_failure(f[order][1:] != f[order][:-1])
    if clash is not None:
        i = clash[0]
        raise NotBijective((order[i], order[i + 1]), "same image")
    if len(f) != phi.codomain.size:
        missed = np.setdiff1d(np.arange(phi.codomain.size), f)
        raise NotBijective((missed[0],), "not in the image")
    return phi


class SemidirectProduct(NamedTuple):
    """`H ⋊ End(H, +_e)` with its isomorphism `Θ` onto `E(H)`."""

    truss: FiniteTruss
    theta: TrussMorphism
    labels: list[EndoElement]
    """Element `x·|End| + i` is `(x, α_i)` for an endomorphism `α_i` of `(H, +_e)`."""

    basepoint: int

    def slice(self) -> SubHeap:
        """The elements `(e, α)`, a copy of `End(H, +_e)` inside the product."""
        members = [
            i for i, label in enumerate(self.labels) if label.offset == self.basepoint
        ]
        return SubHeap(self.truss.heap, tuple(members))


def semidirect_truss(H: FiniteHeap, e: int = 0) -> SemidirectProduct:
    """The truss `H ⋊ End(H, +_e)` with `(x, α)(y, β) = (x +_e α(y), α∘β)`.

    `Θ(x, α) = h ↦ x +_e α(h)` is checked to be a truss isomorphism onto
    [`endomorphism_truss(H)`][trusskit.constructions.endomorphism_truss].
    """
    check_index(H.size, e)
    t = H.bracket_table
    homs0 = group_homomorphisms(H, H)
    cap = get_settings().enumeration_cap
    m = len(homs0)
    if H.size * m > cap**2:
        raise CarrierTooLarge(f"|H ⋊ End| = {H.size * m} exceeds enumeration_cap²")

    # α_e(h) = α(h - e) + e, the endomorphisms of the retract at e
    to_zero = t[:, e, 0]
    ends = np.array([t[alpha.image[to_zero], 0, e] for alpha in homs0])
    end_heap = pointwise_heap(ends, H)
    composition = _composition_table(ends, H)

    k = np.arange(H.size * m)
    x, a = k // m, k % m
    first = t[x[:, None], e, ends[a[:, None], x[None, :]]]
    mul = first * m + composition[a[:, None], a[None, :]]
    truss = build_truss(H.product(end_heap), mul)

    gens = H.generators
    labels = [
        EndoElement(
            offset=int(x[i]),
            generator_images=tuple(int(ends[a[i], g]) for g in gens),
            alpha=tuple(int(v) for v in ends[a[i]]),
        )
        for i in k
    ]

    EH, _ = endomorphism_truss(H)
    eh_maps, _ = _endomorphism_maps(H)
    theta_maps = t[x[:, None], e, ends[a]]
    image = locate(encode_maps(theta_maps, H.size), encode_maps(eh_maps, H.size))
    theta = _require_bijective(TrussMorphism(truss, EH, image).require())
    return SemidirectProduct(truss=truss, theta=theta, labels=labels, basepoint=e)


def subset_semidirect_truss(
    H: FiniteHeap,
    S: Sequence[Sequence[int] | np.ndarray],
) -> FiniteTruss:
    """The truss `H × S` with `(x, α)(y, β) = (x + α(y), α∘β)`.

    Args:
        H: The heap, with group `(H, +)` its retract at 0
        S: Group endomorphisms by images, closed under composition and under the
            pointwise bracket of `(H, +)`. Closure is validated.

    Returns:
        The truss, `(x, S[i])` numbered `x·|S| + i`
    """
    ends = np.array([np.asarray(s, dtype=np.int64) for s in S])
    if ends.ndim != 2 or ends.shape[1] != H.size:
        raise ValueError(f"Endomorphisms must be {H.size} images each")
    for alpha in ends:
        HeapMorphism(H, H, alpha)
        _require_additive(H, alpha)

    end_heap = pointwise_heap(ends, H)
    composition = _composition_table(ends, H)
    m = len(ends)
    k = np.arange(H.size * m)
    x, a = k // m, k % m
    first = H.add_table[x[:, None], ends[a[:, None], x[None, :]]]
    mul = first * m + composition[a[:, None], a[None, :]]
    return build_truss(H.product(end_heap), mul)


def mapping_truss(T: FiniteTruss, x_size: int) -> FiniteTruss:
    """The truss of all maps `{0..x_size-1} → T` with pointwise operations.

    A map is numbered by its values read as base-`|T|` digits, the value at `0`
    being the most significant.
    """
    if x_size < 1:
        raise ValueError(f"x_size must be positive, got {x_size}")

    cap = get_settings().enumeration_cap
    size = T.size**x_size
    if size > cap**2:
        raise CarrierTooLarge(f"|T|^{x_size} = {size} exceeds enumeration_cap²")

    result = FiniteTruss(T.heap, T.mul_table)
    for _ in range(x_size - 1):
        result = result.product(T)
    return build_truss(result.heap, result.mul_table)


def matrix_truss(
    m: int,
    k: int,
    E: Sequence[Sequence[int]] | np.ndarray,
) -> FiniteTruss:
    """The truss on `(ℤ_m)^k` with `r·s = r + sE` for an idempotent matrix `E`.

    Args:
        m: The modulus
        k: The dimension
        E: A `k×k` matrix over `ℤ_m` with `E·E = E`

    Returns:
        The truss, vectors numbered by their digits as in `FiniteHeap.from_cyclic`
    """
    E = np.asarray(E, dtype=np.int64) % m
    if E.shape != (k, k):
        raise ValueError(f"E must be {k}×{k}, got {E.shape}")
    witness = first_failure((E @ E) % m == E)
    if witness is not None:
        raise NotIdempotentMatrix(witness)

    H = FiniteHeap.from_cyclic([m] * k)
    digits = np.stack(np.unravel_index(np.arange(H.size), (m,) * k), axis=-1)
    vectors = (digits[:, None, :] + (digits @ E)[None, :, :]) % m
    mul = np.ravel_multi_index(tuple(np.moveaxis(vectors, -1, 0)), (m,) * k)
    return build_truss(H, mul)
