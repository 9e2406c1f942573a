"""Modules over finite trusses.

A left `T`-module is an Abelian heap `M` with an action `x ▷ m` that is
associative and distributes over the bracket of `M` and over the bracket of `T`.
Right modules are left modules over [`opposite(T)`][trusskit.truss.opposite].

```python
from trusskit.module import induced_action, regular_module
from trusskit.ztruss import zn_truss

M = regular_module(zn_truss(4, 1, 0, 0))
M1 = induced_action(M, 1)  # 1 is now an absorber
```
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, NamedTuple, Sequence
from typing_extensions import Literal

import numpy as np

from trusskit.config import get_settings
from trusskit.constructions import idempotent_endomorphism
from trusskit.errors import (
    AxiomError,
    CarrierTooLarge,
    CompositionLawViolated,
    NotAssociativeAction,
    NotBimodule,
    NotClosed,
    NotHeapDistributive,
    NotInducedSubmodule,
    NotModuleMorphism,
    NotOrdinaryIntegers,
    NotParagon,
    NotSubHeap,
    NotTrussDistributive,
    ParseError,
    check_index,
)
from trusskit.heap import (
    FiniteHeap,
    HeapMorphism,
    SubHeap,
    bracket_witness,
    encode_maps,
    heap_morphisms,
    kernel,
    locate,
    pointwise_heap,
    preserving_rows,
    quotient_heap,
    swap_automorphism,
)
from trusskit.truss import (
    FiniteTruss,
    canonical_action,
    classify_subheap,
    opposite,
    special_elements,
)
from trusskit.util import closure, first_failure, frozen
from trusskit.ztruss import ZAuto, ZTrussParams, canonicalize, word_map, zmul

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TrussModule:
    """A left module, `action[x, m] = x ▷ m`.

    Construct validated modules with [`build_module()`][trusskit.module.build_module].
    """

    truss: FiniteTruss
    heap: FiniteHeap
    action: np.ndarray

    def __post_init__(self) -> None:
        action = frozen(self.action)
        expected = (self.truss.size, self.heap.size)
        if action.shape != expected:
            raise ParseError(f"Action table of shape {action.shape}, need {expected}")
        check_index(self.heap.size, *np.unique(action))
        object.__setattr__(self, "action", action)

    @property
    def size(self) -> int:
        return self.heap.size

    @property
    def elements(self) -> range:
        return self.heap.elements

    def act(self, x: int, m: int) -> int:
        check_index(self.truss.size, x)
        check_index(self.size, m)
        return int(self.action[x, m])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TrussModule):
            return NotImplemented
        return (
            self.truss == other.truss
            and self.heap == other.heap
            and np.array_equal(self.action, other.action)
        )

    def __hash__(self) -> int:
        return hash(self.action.tobytes())

    def __repr__(self) -> str:
        return f"TrussModule(|T|={self.truss.size}, |M|={self.size})"

    @cached_property
    def normalised(self) -> bool:
        """Whether `T` has an identity `1` with `1 ▷ m = m` for every `m`."""
        u = special_elements(self.truss).identity
        return u is not None and bool((self.action[u] == np.arange(self.size)).all())


def _module_violation(
    T: FiniteTruss,
    M: FiniteHeap,
    A: np.ndarray,
) -> AxiomError | None:
    witness = first_failure(A[T.mul_table] == A[:, A])
    if witness is not None:
        return NotAssociativeAction(witness)

    rows = preserving_rows(A, M, M)
    if not rows.all():
        x = int(np.argmin(rows))
        return NotHeapDistributive((x, *(bracket_witness(A[x], M, M) or ())))

    columns = preserving_rows(np.ascontiguousarray(A.T), T.heap, M)
    if not columns.all():
        m = int(np.argmin(columns))
        witness = bracket_witness(A[:, m], T.heap, M) or ()
        return NotTrussDistributive((*witness, m))

    return None


def build_module(
    T: FiniteTruss,
    M: FiniteHeap,
    action: Sequence[Sequence[int]] | np.ndarray,
) -> TrussModule:
    """Build a validated module.

    The checks run in order, the first failure is raised:

    * `(xy) ▷ m = x ▷ (y ▷ m)`, witness `(x, y, m)`
    * `x ▷ [m, m', m''] = [x ▷ m, x ▷ m', x ▷ m'']`, witness `(x, m, m', m'')`
    * `[x, y, z] ▷ m = [x ▷ m, y ▷ m, z ▷ m]`, witness `(x, y, z, m)`
    """
    module = TrussModule(T, M, np.asarray(action, dtype=np.int64))
    violation = _module_violation(T, M, module.action)
    if violation is not None:
        raise violation
    return module


def regular_module(T: FiniteTruss) -> TrussModule:
    """`T` acting on itself by multiplication."""
    return build_module(T, T.heap, T.mul_table)


def trivial_module(T: FiniteTruss, H: FiniteHeap, e: int) -> TrussModule:
    """`x ▷ h = e` for every `x` and `h`."""
    check_index(H.size, e)
    return build_module(T, H, np.full((T.size, H.size), e))


def paragon_module(T: FiniteTruss, P: SubHeap, e: int) -> TrussModule:
    """A left paragon `P` with `x ▷ p = [e, xe, xp]`, members renumbered by position.

    Raises:
        NotParagon: if `P` is not a left paragon
    """
    check_index(T.size, e)
    if e not in P:
        raise ValueError(f"Basepoint {e} is not a member of {P}")

    report = classify_subheap(T, P)
    if not report.left_paragon:
        raise NotParagon(report.witnesses["left_paragon"], "left")

    values = canonical_action(T, e, "left")[:, list(P.members)]
    return build_module(T, P.as_heap(), P.positions[values])


Standard = Literal["regular", "trivial", "paragon"]


def standard_module(
    T: FiniteTruss,
    kind: Standard = "regular",
    *,
    heap: FiniteHeap | None = None,
    subheap: SubHeap | None = None,
    e: int = 0,
) -> TrussModule:
    """One of the standard modules of `T`.

    Args:
        T: The truss
        kind: `"regular"`, `"trivial"` on `heap` (default `T`'s heap) at `e`, or
            `"paragon"` on `subheap` at `e`
        heap: The heap of a trivial module
        subheap: The left paragon of a paragon module
        e: The basepoint

    Returns:
        The module
    """
    if kind == "regular":
        return regular_module(T)
    if kind == "trivial":
        return trivial_module(T, T.heap if heap is None else heap, e)
    if kind == "paragon":
        if subheap is None:
            raise ValueError("A paragon module needs a subheap")
        return paragon_module(T, subheap, e)
    raise ValueError(f"Unknown standard module {kind!r}")


def one_point_module(T: FiniteTruss) -> TrussModule:
    return trivial_module(T, FiniteHeap.from_cyclic([1]), 0)


@dataclass(frozen=True, eq=False)
class ModuleMorphism:
    """A map between modules over the same truss, by the image of each element."""

    domain: TrussModule
    codomain: TrussModule
    image: np.ndarray

    def __post_init__(self) -> None:
        if self.domain.truss != self.codomain.truss:
            raise ValueError("Module morphisms need modules over the same truss")
        object.__setattr__(self, "image", self.heap_morphism.image)

    @classmethod
    def identity(cls, M: TrussModule) -> ModuleMorphism:
        return cls(M, M, np.arange(M.size))

    @cached_property
    def heap_morphism(self) -> HeapMorphism:
        return HeapMorphism(self.domain.heap, self.codomain.heap, self.image)

    def __call__(self, m: int) -> int:
        return self.heap_morphism(m)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ModuleMorphism):
            return NotImplemented
        return (
            self.domain == other.domain
            and self.codomain == other.codomain
            and np.array_equal(self.image, other.image)
        )

    def __hash__(self) -> int:
        return hash(self.image.tobytes())

    def __repr__(self) -> str:
        return f"ModuleMorphism({tuple(int(i) for i in self.image)})"

    def action_witness(self) -> tuple[int, int] | None:
        """The least `(x, m)` with `φ(x ▷ m) != x ▷ φ(m)`, or None."""
        f = self.image
        w = first_failure(f[self.domain.action] == self.codomain.action[:, f])
        return None if w is None else (w[0], w[1])

    @property
    def is_valid(self) -> bool:
        return self.heap_morphism.check().valid and self.action_witness() is None

    def require(self) -> ModuleMorphism:
        """Return self, raising if the bracket or the action is not preserved."""
        self.heap_morphism.require()
        witness = self.action_witness()
        if witness is not None:
            raise NotModuleMorphism(witness)
        return self

    def compose(self, first: ModuleMorphism) -> ModuleMorphism:
        """`self ∘ first`."""
        return ModuleMorphism(first.domain, self.codomain, self.image[first.image])

    @property
    def is_bijective(self) -> bool:
        return self.heap_morphism.is_bijective


@dataclass(frozen=True, eq=False)
class BimodulePair:
    """A `(T, S)`-bimodule.

    The right `S`-action is kept as a left `opposite(S)`-action.
    """

    left: TrussModule
    right: TrussModule
    """`right.action[y, m] = m ◁ y`."""

    def __post_init__(self) -> None:
        if self.left.heap != self.right.heap:
            raise ValueError("Both actions must be on the same heap")

        L, R = self.left.action, self.right.action
        lhs = L[:, R]  # x ▷ (m ◁ y) at (x, y, m)
        rhs = R[:, L].transpose(1, 0, 2)  # (x ▷ m) ◁ y at (x, y, m)
        witness = first_failure(lhs == rhs)
        if witness is not None:
            raise NotBimodule(witness)

    @classmethod
    def regular(cls, T: FiniteTruss) -> BimodulePair:
        """`T` acting on itself from both sides."""
        right = build_module(opposite(T), T.heap, T.mul_table.T)
        return cls(regular_module(T), right)

    @property
    def heap(self) -> FiniteHeap:
        return self.left.heap

    @property
    def left_truss(self) -> FiniteTruss:
        return self.left.truss

    @property
    def right_truss(self) -> FiniteTruss:
        return opposite(self.right.truss)


class HomSet(NamedTuple):
    """The module morphisms `M → N` with their pointwise heap."""

    morphisms: list[ModuleMorphism]
    heap: FiniteHeap | None
    """Element `i` is `morphisms[i]`, None when there are no morphisms."""

    @property
    def maps(self) -> np.ndarray:
        return np.array([phi.image for phi in self.morphisms])


def hom_set(M: TrussModule, N: TrussModule) -> HomSet:
    """Every module morphism `M → N`.

    The heap morphisms `m ↦ n ⋄ α(m)` are generated and those commuting with the
    actions kept. The pointwise bracket is checked to stay inside the set.
    """
    if M.truss != N.truss:
        raise ValueError("Hom-sets need modules over the same truss")
    cap = get_settings().enumeration_cap
    for module in (M, N):
        if module.size > cap:
            raise CarrierTooLarge(
                f"Module of size {module.size} exceeds enumeration_cap={cap}"
            )

    candidates = heap_morphisms(M.heap, N.heap)
    maps = np.array([phi.image for phi in candidates])
    keep = (maps[:, M.action] == N.action[:, maps].transpose(1, 0, 2)).all(axis=(1, 2))
    morphisms = [ModuleMorphism(M, N, f) for f in maps[keep]]
    logger.debug(f"{len(morphisms)} of {len(candidates)} heap morphisms commute")

    if not morphisms:
        return HomSet(morphisms, None)
    return HomSet(morphisms, pointwise_heap(maps[keep], N.heap))


HomSide = Literal["left", "right"]


def hom_module_actions(
    M: BimodulePair,
    N: TrussModule,
    side: HomSide = "left",
) -> tuple[HomSet, TrussModule]:
    """The hom-set between a bimodule and a module as a module over `S`.

    Args:
        M: A `(T, S)`-bimodule
        N: A left `T`-module
        side: `"left"` for `Hom(M, N)` as a left `S`-module with
            `(s ▷ φ)(m) = φ(m ◁ s)`; `"right"` for `Hom(N, M)` as a right
            `S`-module with `(φ ◁ s)(n) = φ(n) ◁ s`, returned as a left
            `opposite(S)`-module

    Returns:
        The hom-set and the module on its heap
    """
    R = M.right.action
    if side == "left":
        homs = hom_set(M.left, N)
        maps = homs.maps
        acted = maps[:, R].transpose(1, 0, 2)  # (s, φ, m) ↦ φ(m ◁ s)
        codomain = N.heap
    elif side == "right":
        homs = hom_set(N, M.left)
        maps = homs.maps
        acted = R[:, maps]  # (s, φ, n) ↦ φ(n) ◁ s
        codomain = M.heap
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")

    if homs.heap is None:
        raise ValueError("An empty hom-set carries no module")

    table = locate(encode_maps(acted, codomain.size), encode_maps(maps, codomain.size))
    witness = first_failure(table >= 0)
    if witness is not None:
        raise NotClosed(witness, "action leaves the hom-set")
    truss = M.right_truss if side == "left" else M.right.truss
    return homs, build_module(truss, homs.heap, table)


@dataclass(frozen=True)
class SubmoduleReport:
    """How a sub-heap sits inside a module."""

    subject: SubHeap
    submodule: bool
    induced_submodule: bool
    contains_absorber: bool
    witnesses: Mapping[str, tuple[int, ...]] = field(default_factory=dict)
    """`(x, n)` with `x ▷ n ∉ N` or `x ▷ᵉ n ∉ N` for `e = min(N)`."""


def is_absorber(M: TrussModule, e: int) -> bool:
    """Whether `x ▷ e = e` for every `x`."""
    check_index(M.size, e)
    return bool((M.action[:, e] == e).all())


def classify_submodule(M: TrussModule, N: SubHeap) -> SubmoduleReport:
    """Whether `N` is closed under the action and under the induced action.

    Being an induced submodule does not depend on the basepoint in `N`, so it is
    tested at `e = min(N)`.
    """
    if N.parent != M.heap:
        raise NotSubHeap((), "Sub-heap belongs to a different heap")

    A, t = M.action, M.heap.bracket_table
    n = np.array(N.members)
    e = N.members[0]
    witnesses = {}

    w = first_failure(N.mask[A[:, n]])
    if w is not None:
        witnesses["submodule"] = (w[0], N.members[w[1]])

    w = first_failure(N.mask[t[A[:, n], A[:, e][:, None], e]])
    if w is not None:
        witnesses["induced_submodule"] = (w[0], N.members[w[1]])

    return SubmoduleReport(
        subject=N,
        submodule="submodule" not in witnesses,
        induced_submodule="induced_submodule" not in witnesses,
        contains_absorber=any(is_absorber(M, m) for m in N.members),
        witnesses=witnesses,
    )


def descent_witness(M: TrussModule, N: SubHeap) -> tuple[int, int, int] | None:
    """The least `(x, m, m')` with `m ~ m'` but `x ▷ m ≁ x ▷ m'` modulo `N`."""
    _, projection = quotient_heap(M.heap, N)
    c = projection.image
    same = c[:, None] == c[None, :]
    cA = c[M.action]
    apart = same[None, :, :] & (cA[:, :, None] != cA[:, None, :])
    w = first_failure(~apart)
    return None if w is None else (w[0], w[1], w[2])


def quotient_module(M: TrussModule, N: SubHeap) -> tuple[TrussModule, ModuleMorphism]:
    """The quotient `M/N` with `x ▷ [m] = [x ▷ m]`.

    Returns:
        The quotient and the projection onto it

    Raises:
        NotInducedSubmodule: when the action does not descend
    """
    report = classify_submodule(M, N)
    if not report.induced_submodule:
        raise NotInducedSubmodule(report.witnesses["induced_submodule"])

    Q, projection = quotient_heap(M.heap, N)
    c = projection.image
    reps = [fibre[0] for fibre in projection.fibres()]
    quotient = build_module(M.truss, Q, c[M.action[:, reps]])
    return quotient, ModuleMorphism(M, quotient, c)


class CyclicQuotient(NamedTuple):
    submodule: SubHeap
    """The smallest submodule containing `e`."""

    quotient: TrussModule
    projection: ModuleMorphism


def cyclic_submodule(M: TrussModule, e: int) -> SubHeap:
    """The smallest submodule containing `e`."""
    check_index(M.size, e)
    A, t = M.action, M.heap.bracket_table
    return SubHeap(
        M.heap,
        closure(
            [e],
            lambda m: np.concatenate([t[np.ix_(m, m, m)].ravel(), A[:, m].ravel()]),
        ),
    )


def cyclic_and_absorber_quotient(M: TrussModule, e: int) -> CyclicQuotient:
    """Divide out the cyclic submodule of `e`, the class of `e` becomes an absorber.

    Every morphism sending `e` to an absorber factors through the projection.
    """
    Te = cyclic_submodule(M, e)
    quotient, projection = quotient_module(M, Te)
    return CyclicQuotient(Te, quotient, projection)


def induced_action(M: TrussModule, e: int) -> TrussModule:
    """The module `(M, λᵉ)` with `x ▷ᵉ m = [x ▷ m, x ▷ e, e]`, where `e` absorbs."""
    check_index(M.size, e)
    A, t = M.action, M.heap.bracket_table
    return build_module(M.truss, M.heap, t[A, A[:, e][:, None], e])


def induced_isomorphism(M: TrussModule, e: int, f: int) -> ModuleMorphism:
    """`τ_e^f` as an isomorphism `(M, λᵉ) → (M, λᶠ)`."""
    tau = swap_automorphism(M.heap, e, f)
    domain, codomain = induced_action(M, e), induced_action(M, f)
    return ModuleMorphism(domain, codomain, tau.image).require()


def module_kernel(phi: ModuleMorphism, e: int) -> SubHeap:
    """The pre-image of `e`, an induced submodule of the domain."""
    return kernel(phi.heap_morphism, e)


def trivial_adjustment(
    T: FiniteTruss,
    phi: HeapMorphism,
    e: int,
    f: int,
) -> ModuleMorphism:
    """`h ↦ [φ(h), φ(e), f]` between the trivial modules at `e` and at `f`."""
    check_index(phi.domain.size, e)
    t = phi.codomain.bracket_table
    image = t[phi.image, phi.image[e], f]
    return ModuleMorphism(
        trivial_module(T, phi.domain, e),
        trivial_module(T, phi.codomain, f),
        image,
    ).require()


def product_module(M: TrussModule, N: TrussModule) -> TrussModule:
    """`M × N` with `x ▷ (m, n) = (x ▷ m, x ▷ n)`, pairs numbered `m·|N| + n`."""
    if M.truss != N.truss:
        raise ValueError("Product modules need modules over the same truss")
    size = M.size * N.size
    cap = get_settings().enumeration_cap
    if size > cap**2:
        raise CarrierTooLarge(f"|M × N| = {size} exceeds enumeration_cap²")

    action = M.action[:, :, None] * N.size + N.action[:, None, :]
    return build_module(M.truss, M.heap.product(N.heap), action.reshape(-1, size))


def function_module(M: TrussModule, x_size: int) -> TrussModule:
    """All maps `{0..x_size-1} → M` with the pointwise action.

    The module counterpart of `mapping_truss`.
    """
    if x_size < 1:
        raise ValueError(f"x_size must be positive, got {x_size}")
    cap = get_settings().enumeration_cap
    if M.size**x_size > cap**2:
        raise CarrierTooLarge(f"|M|^{x_size} exceeds enumeration_cap²")

    result = M
    for _ in range(x_size - 1):
        result = product_module(result, M)
    return result


Combinator = Literal["product", "function"]


def module_combinators(
    M: TrussModule,
    kind: Combinator = "product",
    *,
    other: TrussModule | None = None,
    x_size: int = 1,
) -> TrussModule:
    """`M × other` or the module of maps `{0..x_size-1} → M`."""
    if kind == "product":
        if other is None:
            raise ValueError("A product module needs a second module")
        return product_module(M, other)
    if kind == "function":
        return function_module(M, x_size)
    raise ValueError(f"Unknown module combinator {kind!r}")


STANDARD_INTEGERS = ZTrussParams.commutative(1, 0, 0)


@dataclass(frozen=True, eq=False)
class ZActionModule:
    """A heap `H` as a module over a truss on the integers isomorphic to `(ℤ, ·)`.

    `n ▷ x = n·ι(x) - (n-1)·ε(x)` for the usual product, other parameters act
    through the isomorphism to it.
    """

    heap: FiniteHeap
    eps: np.ndarray
    iota: np.ndarray
    params: ZTrussParams = STANDARD_INTEGERS
    transport: ZAuto = ZAuto()
    """Carries `params` to the usual product."""

    def act(self, n: int, x: int) -> int:
        H = self.heap
        k = self.transport(n)
        ix, ex = int(self.iota[x]), int(self.eps[x])
        return int(H.add_table[H.scale(k, ix), H.scale(1 - k, ex)])

    def multibracket_action(self, n: int, x: int) -> int:
        """The same action as the alternating multibracket of `ι(x)` and `ε(x)`."""
        k = self.transport(n)
        ix, ex = int(self.iota[x]), int(self.eps[x])
        if k > 0:
            items = [ix, ex] * (k - 1) + [ix]
        else:
            items = [ex, ix] * (-k) + [ex]
        return self.heap.multibracket(items)

    def table(self, window: Sequence[int]) -> np.ndarray:
        """`table[i, x] = window[i] ▷ x`."""
        return np.array([[self.act(n, x) for x in self.heap.elements] for n in window])

    def verify(self, window: Sequence[int] = range(-20, 21)) -> ZActionModule:
        """Check the module laws for the integers in `window`, returning self."""
        H = self.heap
        window = list(window)
        table = dict(zip(window, self.table(window)))
        t = H.bracket_table

        for m in window:
            for n in window:
                lhs = np.array([self.act(zmul(self.params, m, n), x) for x in H])
                w = first_failure(lhs == table[m][table[n]])
                if w is not None:
                    raise NotAssociativeAction((m, n, w[0]))

        for n in window:
            row = table[n]
            w = first_failure(row[t] == t[np.ix_(row, row, row)])
            if w is not None:
                raise NotHeapDistributive((n, *w))

        lo, hi = 2 * min(window) - max(window), 2 * max(window) - min(window)
        wide = dict(zip(range(lo, hi + 1), self.table(range(lo, hi + 1))))
        for l in window:
            for m in window:
                for n in window:
                    lhs = wide[l - m + n]
                    rhs = t[table[l], table[m], table[n]]
                    w = first_failure(lhs == rhs)
                    if w is not None:
                        raise NotTrussDistributive((l, m, n, w[0]))
        return self


def z_action_module(
    H: FiniteHeap,
    eps: Sequence[int] | np.ndarray,
    iota: Sequence[int] | np.ndarray,
    params: ZTrussParams = STANDARD_INTEGERS,
) -> ZActionModule:
    """The action of the integers on `H` by two commuting idempotents.

    Args:
        H: The heap
        eps: An idempotent heap endomorphism
        iota: An idempotent heap endomorphism with `ε∘ι = ι∘ε = ε`
        params: A truss on the integers isomorphic to the usual product

    Returns:
        The module

    Raises:
        NotOrdinaryIntegers: if `params` is not isomorphic to the usual product
    """
    e = idempotent_endomorphism(H, eps)
    i = idempotent_endomorphism(H, iota)
    for composite in (e[i], i[e]):
        w = first_failure(composite == e)
        if w is not None:
            raise CompositionLawViolated(w)

    canonical, word = canonicalize(params)
    if canonical != STANDARD_INTEGERS:
        raise NotOrdinaryIntegers(
            params.triple, f"{params} is not isomorphic to (1,0,0)"
        )
    return ZActionModule(H, e, i, params=params, transport=word_map(word))
