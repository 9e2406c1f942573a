"""Finite trusses, their paragons, ideals, quotients and associated rings.

A truss is an Abelian heap with an associative product that distributes over
the bracket on both sides, `w[x,y,z] = [wx,wy,wz]` and `[x,y,z]w = [xw,yw,zw]`.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence
from typing_extensions import Literal

import numpy as np
from more_itertools import first_true

from trusskit.config import get_settings
from trusskit.errors import (
    CarrierTooLarge,
    EmptyGenerator,
    IndexOutOfRange,
    NotAssociative,
    NotCentral,
    NotLeftDistributive,
    NotParagon,
    NotRightDistributive,
    NotSubHeap,
    NotSubTruss,
    NotTrussMorphism,
    ParseError,
    check_index,
)
from trusskit.heap import (
    FiniteHeap,
    HeapMorphism,
    SubHeap,
    bracket_witness,
    heap_morphisms,
    is_normal,
    kernel,
    preserving_rows,
    quotient_heap,
)
from trusskit.util import closure, first_failure, frozen

logger = logging.getLogger(__name__)

Side = Literal["left", "right"]


@dataclass(frozen=True, eq=False)
class FiniteTruss:
    """A heap together with a product table, `mul_table[x, y] = xy`.

    Construct validated trusses with [`build_truss()`][trusskit.truss.build_truss].
    """

    heap: FiniteHeap
    mul_table: np.ndarray
    """Row-major, the row is the left factor."""

    def __post_init__(self) -> None:
        table = frozen(self.mul_table)
        n = self.heap.size
        if table.shape != (n, n):
            raise ParseError(f"Product table of shape {table.shape} for carrier {n}")
        if table.min() < 0 or table.max() >= n:
            raise IndexOutOfRange(f"Product table entries must lie in 0..{n - 1}")
        object.__setattr__(self, "mul_table", table)

    @property
    def size(self) -> int:
        return self.heap.size

    @property
    def elements(self) -> range:
        return self.heap.elements

    def __len__(self) -> int:
        return self.size

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteTruss):
            return NotImplemented
        return self.heap == other.heap and np.array_equal(
            self.mul_table, other.mul_table
        )

    def __hash__(self) -> int:
        return hash((self.heap, self.mul_table.tobytes()))

    def __repr__(self) -> str:
        return f"FiniteTruss(n={self.size})"

    def mul(self, x: int, y: int) -> int:
        """The product `xy`."""
        check_index(self.size, x, y)
        return int(self.mul_table[x, y])

    @property
    def is_commutative(self) -> bool:
        return bool((self.mul_table == self.mul_table.T).all())

    def product(self, other: FiniteTruss) -> FiniteTruss:
        """The componentwise product truss, numbered as in `FiniteHeap.product`."""
        n1, n2 = self.size, other.size
        A, B = self.mul_table, other.mul_table
        table = A[:, None, :, None] * n2 + B[None, :, None, :]
        size = n1 * n2
        return FiniteTruss(self.heap.product(other.heap), table.reshape(size, size))


def _distributivity_witness(
    T: FiniteTruss, maps: np.ndarray
) -> tuple[int, ...] | None:
    ok = preserving_rows(maps, T.heap, T.heap)
    w = first_true(range(len(ok)), pred=lambda i: not ok[i])
    if w is None:
        return None
    triple = bracket_witness(maps[w], T.heap, T.heap)
    assert triple is not None
    return (w, *triple)


def build_truss(
    H: FiniteHeap,
    mul: Sequence[Sequence[int]] | np.ndarray,
) -> FiniteTruss:
    """Build a validated truss.

    Args:
        H: The heap
        mul: The `n×n` product table, the row is the left factor

    Returns:
        The truss

    Raises:
        NotAssociative: with the least `(x, y, z)` where `(xy)z != x(yz)`
        NotLeftDistributive: with the least `(w, x, y, z)` where
            `w[x,y,z] != [wx,wy,wz]`
        NotRightDistributive: with the least `(w, x, y, z)` where
            `[x,y,z]w != [xw,yw,zw]`
    """
    T = FiniteTruss(H, np.asarray(mul))
    M = T.mul_table

    witness = first_failure(M[M] == M[:, M])
    if witness is not None:
        raise NotAssociative(witness)

    witness = _distributivity_witness(T, M)
    if witness is not None:
        raise NotLeftDistributive(witness)

    witness = _distributivity_witness(T, np.ascontiguousarray(M.T))
    if witness is not None:
        raise NotRightDistributive(witness)

    return T


def opposite(T: FiniteTruss) -> FiniteTruss:
    """The opposite truss, `x ·op y = yx`."""
    return FiniteTruss(T.heap, np.ascontiguousarray(T.mul_table.T))


@dataclass(frozen=True)
class SpecialElements:
    """Identities, absorbers, central elements and idempotents of a truss."""

    identity: int | None
    absorber: int | None
    central: tuple[int, ...]
    idempotents: tuple[int, ...]
    left_identities: tuple[int, ...] = ()
    """Elements `l` with `lx = x` for all `x`."""

    right_identities: tuple[int, ...] = ()
    """Elements `r` with `xr = x` for all `x`."""

    left_absorbers: tuple[int, ...] = ()
    """Elements `z` with `zx = z` for all `x`."""

    right_absorbers: tuple[int, ...] = ()
    """Elements `z` with `xz = z` for all `x`."""

    @property
    def unital(self) -> bool:
        return self.identity is not None

    @property
    def ring_type(self) -> bool:
        return self.absorber is not None

    @property
    def left_braceable(self) -> bool:
        return len(self.left_identities) > 0

    @property
    def right_braceable(self) -> bool:
        return len(self.right_identities) > 0


def _where(mask: np.ndarray) -> tuple[int, ...]:
    return tuple(int(i) for i in np.flatnonzero(mask))


def special_elements(T: FiniteTruss) -> SpecialElements:
    """Scan for the distinguished elements of `T`."""
    M = T.mul_table
    ar = np.arange(T.size)
    left_ids = _where((M == ar[None, :]).all(axis=1))
    right_ids = _where((M == ar[:, None]).all(axis=0))
    left_abs = _where((M == ar[:, None]).all(axis=1))
    right_abs = _where((M == ar[None, :]).all(axis=0))
    return SpecialElements(
        identity=first_true(left_ids, pred=lambda u: u in right_ids),
        absorber=first_true(left_abs, pred=lambda z: z in right_abs),
        central=_where((M == M.T).all(axis=1)),
        idempotents=_where(M[ar, ar] == ar),
        left_identities=left_ids,
        right_identities=right_ids,
        left_absorbers=left_abs,
        right_absorbers=right_abs,
    )


def canonical_action(T: FiniteTruss, e: int, side: Side = "left") -> np.ndarray:
    """The table of `λᵉ(x, y) = [e, xe, xy]` or `ρᵉ(x, y) = [e, ey, xy]`.

    Args:
        T: The truss
        e: The basepoint, sent to itself by every `λᵉ(x, -)`
        side: `"left"` for `λᵉ`, `"right"` for `ρᵉ`

    Returns:
        The `n×n` table indexed by `(x, y)`
    """
    check_index(T.size, e)
    M, t = T.mul_table, T.heap.bracket_table
    if side == "left":
        return frozen(t[e, M[:, e][:, None], M])
    if side == "right":
        return frozen(t[e, M[e, :][None, :], M])
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


FLAGS = (
    "subheap",
    "normal",
    "left_paragon",
    "right_paragon",
    "paragon",
    "left_ideal",
    "right_ideal",
    "ideal",
    "subtruss",
)


@dataclass(frozen=True)
class SubStructureReport:
    """How a sub-heap sits inside a truss."""

    subject: SubHeap
    subheap: bool
    normal: bool
    left_paragon: bool
    right_paragon: bool
    paragon: bool
    left_ideal: bool
    right_ideal: bool
    ideal: bool
    subtruss: bool
    witnesses: Mapping[str, tuple[int, ...]] = field(default_factory=dict)
    """The first violating tuple of each failed flag.

    * paragons: `(x, p, p')` with `[xp, xp', p'] ∉ S` (left) or `[px, p'x, p'] ∉ S`
    * ideals: `(x, s)` with `xs ∉ S` (left) or `sx ∉ S` (right)
    * sub-truss: `(s, s')` with `ss' ∉ S`
    """

    @property
    def flags(self) -> dict[str, bool]:
        """Every flag by name, in the order of `FLAGS`."""
        return {name: getattr(self, name) for name in FLAGS}


def _paragon_witness(T: FiniteTruss, S: SubHeap, side: Side) -> tuple[int, ...] | None:
    """Least `(x, p, p')` violating the universal paragon condition on `side`."""
    M, t = T.mul_table, T.heap.bracket_table
    s = np.array(S.members)
    if side == "left":
        xp = M[:, s]  # (x, p)
        values = t[xp[:, :, None], xp[:, None, :], s[None, None, :]]
    else:
        px = M[s, :].T  # (x, p)
        values = t[px[:, :, None], px[:, None, :], s[None, None, :]]
    w = first_failure(S.mask[values])
    if w is None:
        return None
    return (w[0], S.members[w[1]], S.members[w[2]])


def _single_witness_holds(T: FiniteTruss, S: SubHeap, side: Side) -> bool:
    """The paragon condition at the fixed witness `e = min(S)`."""
    M, t = T.mul_table, T.heap.bracket_table
    e = S.members[0]
    s = np.array(S.members)
    if side == "left":
        values = t[M[:, s], M[:, e][:, None], e]
    else:
        values = t[M[s, :].T, M[e, :][:, None], e]
    return bool(S.mask[values].all())


def classify_subheap(T: FiniteTruss, S: SubHeap) -> SubStructureReport:
    """Compute every flag of `S` as a sub-heap of `T`.

    Paragons are decided at the single witness `e = min(S)`. On carriers up to
    the configured `crosscheck_cap` the universal condition is evaluated too and
    the two must agree.
    """
    if S.parent != T.heap:
        raise NotSubHeap((), "Sub-heap belongs to a different heap")

    M = T.mul_table
    s = np.array(S.members)
    crosscheck = T.size <= get_settings().crosscheck_cap
    flags: dict[str, bool] = {"subheap": True, "normal": is_normal(S)}
    witnesses: dict[str, tuple[int, ...]] = {}

    sides: tuple[Side, Side] = ("left", "right")
    for side in sides:
        name = f"{side}_paragon"
        holds = _single_witness_holds(T, S, side)
        if crosscheck or not holds:
            witness = _paragon_witness(T, S, side)
            if (witness is None) != holds:
                raise RuntimeError(
                    f"Single witness and universal {name} tests disagree on {S}",
                )
            if witness is not None:
                witnesses[name] = witness
        flags[name] = holds
    flags["paragon"] = flags["left_paragon"] and flags["right_paragon"]

    for name, values in (("left_ideal", M[:, s]), ("right_ideal", M[s, :].T)):
        w = first_failure(S.mask[values])
        flags[name] = w is None
        if w is not None:
            witnesses[name] = (w[0], S.members[w[1]])
    flags["ideal"] = flags["left_ideal"] and flags["right_ideal"]

    w = first_failure(S.mask[M[np.ix_(s, s)]])
    flags["subtruss"] = w is None
    if w is not None:
        witnesses["subtruss"] = (S.members[w[0]], S.members[w[1]])

    return SubStructureReport(subject=S, witnesses=witnesses, **flags)


Kind = Literal[
    "subheaps",
    "paragons",
    "left_paragons",
    "right_paragons",
    "ideals",
    "subtrusses",
]


def enumerate_substructures(T: FiniteTruss, kind: Kind = "subheaps") -> list[SubHeap]:
    """Every sub-heap of `T` of the given kind, sorted by members.

    Sub-heaps of an Abelian heap are exactly the cosets of subgroups of a retract,
    so these are enumerated instead of all subsets.
    """
    cap = get_settings().enumeration_cap
    if T.size > cap:
        raise CarrierTooLarge(
            f"Carrier of size {T.size} exceeds enumeration_cap={cap}"
        )

    subheaps = T.heap.subheaps()
    if kind == "subheaps":
        return subheaps

    flag = {
        "paragons": "paragon",
        "left_paragons": "left_paragon",
        "right_paragons": "right_paragon",
        "ideals": "ideal",
        "subtrusses": "subtruss",
    }.get(kind)
    if flag is None:
        raise ValueError(f"Unknown kind {kind!r}")

    found = [S for S in subheaps if classify_subheap(T, S).flags[flag]]
    logger.debug(f"{len(found)} {kind} among {len(subheaps)} sub-heaps of {T}")
    return found


@dataclass(frozen=True, eq=False)
class TrussMorphism:
    """A map between trusses, given by the image of each element."""

    domain: FiniteTruss
    codomain: FiniteTruss
    image: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "image", self.heap_morphism.image)

    @cached_property
    def heap_morphism(self) -> HeapMorphism:
        return HeapMorphism(self.domain.heap, self.codomain.heap, self.image)

    def __call__(self, x: int) -> int:
        return self.heap_morphism(x)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TrussMorphism):
            return NotImplemented
        return (
            self.domain == other.domain
            and self.codomain == other.codomain
            and np.array_equal(self.image, other.image)
        )

    def __hash__(self) -> int:
        return hash(self.image.tobytes())

    def __repr__(self) -> str:
        return f"TrussMorphism({tuple(int(i) for i in self.image)})"

    def product_witness(self) -> tuple[int, int] | None:
        """The least `(x, y)` with `f(xy) != f(x)f(y)`, or None."""
        f = self.image
        image_of_products = f[self.domain.mul_table]
        w = first_failure(image_of_products == self.codomain.mul_table[np.ix_(f, f)])
        return None if w is None else (w[0], w[1])

    @property
    def is_valid(self) -> bool:
        return self.heap_morphism.check().valid and self.product_witness() is None

    def require(self) -> TrussMorphism:
        """Return self, raising if either operation is not preserved."""
        self.heap_morphism.require()
        witness = self.product_witness()
        if witness is not None:
            raise NotTrussMorphism(witness)
        return self

    def compose(self, first: TrussMorphism) -> TrussMorphism:
        """`self ∘ first`."""
        return TrussMorphism(first.domain, self.codomain, self.image[first.image])

    @property
    def is_bijective(self) -> bool:
        return self.heap_morphism.is_bijective

    def inverse(self) -> TrussMorphism:
        inv = self.heap_morphism.inverse()
        return TrussMorphism(self.codomain, self.domain, inv.image)

    def image_subheap(self) -> SubHeap:
        """The image as a sub-heap of the codomain."""
        return SubHeap.of(self.codomain.heap, self.image)

    def kernel(self, e: int) -> SubHeap:
        """The pre-image of `e`."""
        return kernel(self.heap_morphism, e)


def restrict(T: FiniteTruss, S: SubHeap) -> tuple[FiniteTruss, TrussMorphism]:
    """The sub-truss on `S`, renumbered by position in `S.members`.

    Returns:
        The sub-truss and its inclusion into `T`
    """
    report = classify_subheap(T, S)
    if not report.subtruss:
        raise NotSubTruss(report.witnesses["subtruss"])

    m = np.array(S.members)
    sub = FiniteTruss(S.as_heap(), S.positions[T.mul_table[np.ix_(m, m)]])
    return sub, TrussMorphism(sub, T, m)


def quotient_truss(T: FiniteTruss, P: SubHeap) -> tuple[FiniteTruss, TrussMorphism]:
    """The quotient `T/P`, defined exactly when `P` is a paragon.

    Returns:
        The quotient truss and the projection onto it

    Raises:
        NotParagon: with the least `(x, p, p')` showing `p ~ p'` while
            `xp` and `xp'` (or `px` and `p'x`) fall in different classes
    """
    if P.parent != T.heap:
        raise NotSubHeap((), "Sub-heap belongs to a different heap")

    report = classify_subheap(T, P)
    if not report.paragon:
        side = "left" if not report.left_paragon else "right"
        raise NotParagon(report.witnesses[f"{side}_paragon"], side)

    Q, projection = quotient_heap(T.heap, P)
    c = projection.image
    reps = np.array([fibre[0] for fibre in projection.fibres()])
    quotient = FiniteTruss(Q, c[T.mul_table[np.ix_(reps, reps)]])
    return quotient, TrussMorphism(T, quotient, c)


def principal_ideal(T: FiniteTruss, e: int) -> SubHeap:
    """The smallest ideal containing `e`."""
    check_index(T.size, e)
    M, t = T.mul_table, T.heap.bracket_table

    def step(m: np.ndarray) -> np.ndarray:
        return np.concatenate(
            [t[np.ix_(m, m, m)].ravel(), M[:, m].ravel(), M[m, :].ravel()],
        )

    return SubHeap(T.heap, closure([e], step))


def paragon_generated(T: FiniteTruss, X: Iterable[int]) -> SubHeap:
    """The smallest paragon containing `X`.

    The closure adds brackets and the images of the canonical actions at
    `e = min(X)` until nothing new appears.
    """
    X = sorted({int(x) for x in X})
    if not X:
        raise EmptyGenerator("The paragon generated by the empty set is not modelled")
    check_index(T.size, *X)
    M, t = T.mul_table, T.heap.bracket_table
    e = X[0]

    def step(m: np.ndarray) -> np.ndarray:
        return np.concatenate(
            [
                t[np.ix_(m, m, m)].ravel(),
                t[M[:, m], M[:, e][:, None], e].ravel(),
                t[M[m, :], M[e, :][None, :], e].ravel(),
            ],
        )

    return SubHeap(T.heap, closure(X, step))


def ringify(T: FiniteTruss, e: int) -> tuple[SubHeap, FiniteTruss, TrussMorphism]:
    """The universal ring-type quotient `T/⟨e⟩`, in which the class of `e` absorbs.

    Returns:
        The principal ideal, the quotient and the projection
    """
    ideal = principal_ideal(T, e)
    quotient, projection = quotient_truss(T, ideal)
    return ideal, quotient, projection


@dataclass(frozen=True, eq=False)
class RingTable:
    """A finite ring given by tables, with zero `zero`."""

    zero: int
    add_table: np.ndarray
    mul_table: np.ndarray

    def __post_init__(self) -> None:
        A, M = frozen(self.add_table), frozen(self.mul_table)
        object.__setattr__(self, "add_table", A)
        object.__setattr__(self, "mul_table", M)

        witness = first_failure(M[M] == M[:, M])
        if witness is not None:
            raise NotAssociative(witness)
        # x(y+z) = xy+xz and (y+z)x = yx+zx
        left = M[:, A] == A[M[:, :, None], M[:, None, :]]
        witness = first_failure(left)
        if witness is not None:
            raise NotLeftDistributive(witness)
        right = M.T[:, A] == A[M.T[:, :, None], M.T[:, None, :]]
        witness = first_failure(right)
        if witness is not None:
            raise NotRightDistributive(witness)

    @property
    def carrier_size(self) -> int:
        return int(self.add_table.shape[0])


def ring_at(T: FiniteTruss, e: int) -> RingTable:
    """The ring on `(T, +_e)` with `x •_e y = [xy, [x, e, y]e, e]`.

    Raises:
        NotCentral: if `e` does not commute with some `x`
    """
    check_index(T.size, e)
    M, t = T.mul_table, T.heap.bracket_table
    witness = first_failure(M[e, :] == M[:, e])
    if witness is not None:
        raise NotCentral((e, *witness))

    add = t[:, e, :]
    mul = t[M, M[add, e], e]
    return RingTable(zero=e, add_table=add, mul_table=mul)


@dataclass(frozen=True, eq=False)
class BraceView:
    """The brace `(T, +_1, ·)` of a unital truss with identity `1`."""

    identity: int
    plus_table: np.ndarray
    """`x +_1 y = [x, 1, y]`."""

    mul_table: np.ndarray
    is_group: bool
    """Whether `(T, ·)` is a group, making this a two-sided brace."""


def brace_view(T: FiniteTruss) -> BraceView | None:
    """The brace of a unital truss, None when `T` has no identity.

    Both brace laws `x(y +_1 z) = xy -_1 x +_1 xz` and the mirror image are
    verified over every triple.
    """
    u = special_elements(T).identity
    if u is None:
        return None

    M, t = T.mul_table, T.heap.bracket_table
    plus = t[:, u, :]
    ar = np.arange(T.size)[:, None, None]
    # a -_1 b +_1 c is the bracket [a, b, c]
    left = M[ar, plus[None, :, :]] == t[M[:, :, None], ar, M[:, None, :]]
    right = M[plus[None, :, :], ar] == t[M.T[:, :, None], ar, M.T[:, None, :]]
    witness = first_failure(left)
    if witness is not None:
        raise NotLeftDistributive(witness, "brace law")
    witness = first_failure(right)
    if witness is not None:
        raise NotRightDistributive(witness, "brace law")

    has_inverse = ((M == u) & (M.T == u)).any(axis=1)
    return BraceView(
        identity=u,
        plus_table=frozen(plus),
        mul_table=T.mul_table,
        is_group=bool(has_inverse.all()),
    )


def truss_isomorphisms(T1: FiniteTruss, T2: FiniteTruss) -> list[TrussMorphism]:
    """Every truss isomorphism `T1 → T2`.

    Heap isomorphisms are exactly the maps `h ↦ x ⋄ α(h)` with `α` a group
    automorphism, those preserving the product are kept.
    """
    cap = get_settings().enumeration_cap
    for T in (T1, T2):
        if T.size > cap:
            raise CarrierTooLarge(
                f"Carrier of size {T.size} exceeds enumeration_cap={cap}"
            )
    if T1.size != T2.size:
        return []

    M1, M2 = T1.mul_table, T2.mul_table
    found = []
    for phi in heap_morphisms(T1.heap, T2.heap):
        f = phi.image
        if phi.is_bijective and (f[M1] == M2[np.ix_(f, f)]).all():
            found.append(TrussMorphism(T1, T2, f))
    return found

