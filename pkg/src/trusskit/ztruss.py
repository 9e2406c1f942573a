"""Truss structures on the heap of integers and on its finite quotients.

Every commutative truss product on `ℤ` has the form `m·n = amn + b(m+n) + c`
with `ac = b(b-1)`; the only others are the projections `m·n = m` and
`m·n = n`. The heap automorphisms `φ_k^±: n ↦ k ± n` act on the triples and the
orbits are the isomorphism classes.

```python
from trusskit.ztruss import ZTrussParams, canonicalize, type3_structures

p = ZTrussParams.commutative(1, 3, 6)
canonical, word = canonicalize(p)  # (1, 0, 0) reached by φ_3^+

type3_structures(6)  # [(3, 1), (4, 2)]
```
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import reduce
from itertools import product
from typing import Iterable, Sequence
from typing_extensions import Literal, Self

import numpy as np
import sympy

from trusskit.config import get_settings
from trusskit.errors import CarrierTooLarge, ConstraintViolated, NotIdempotentTraceOne
from trusskit.heap import FiniteHeap
from trusskit.truss import FiniteTruss, build_truss

logger = logging.getLogger(__name__)

ZVariant = Literal["commutative", "left", "right"]


def affine_product(a: int, b: int, c: int, m: int, n: int) -> int:
    """`amn + b(m+n) + c` for any triple, constrained or not."""
    return a * m * n + b * (m + n) + c


@dataclass(frozen=True)
class ZTrussParams:
    """A truss product on the heap of integers.

    Use the classmethods, the projections carry no triple.
    """

    variant: ZVariant = "commutative"
    a: int = 0
    b: int = 0
    c: int = 0

    def __post_init__(self) -> None:
        if self.variant not in ("commutative", "left", "right"):
            raise ValueError(f"Unknown variant {self.variant!r}")
        if self.variant != "commutative":
            if (self.a, self.b, self.c) != (0, 0, 0):
                raise ValueError("Projection products carry no (a, b, c)")
            return

        if self.a * self.c != self.b * (self.b - 1):
            raise ConstraintViolated(
                (self.a, self.b, self.c),
                f"ac = {self.a * self.c} but b(b-1) = {self.b * (self.b - 1)}",
            )

    @classmethod
    def commutative(cls, a: int, b: int, c: int) -> Self:
        return cls("commutative", int(a), int(b), int(c))

    @classmethod
    def left(cls) -> Self:
        """`m·n = m`."""
        return cls("left")

    @classmethod
    def right(cls) -> Self:
        """`m·n = n`."""
        return cls("right")

    @property
    def triple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def __str__(self) -> str:
        if self.variant == "commutative":
            return f"({self.a},{self.b},{self.c})"
        return self.variant


def zmul(p: ZTrussParams, m: int, n: int) -> int:
    """The product `m·n` under `p`, in exact integer arithmetic."""
    if p.variant == "left":
        return m
    if p.variant == "right":
        return n
    return affine_product(p.a, p.b, p.c, m, n)


@dataclass(frozen=True)
class ZAuto:
    """The heap automorphism `n ↦ k + sign·n` of the integers."""

    k: int = 0
    sign: int = 1

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be 1 or -1, got {self.sign}")

    def __call__(self, n: int) -> int:
        return self.k + self.sign * n

    def __str__(self) -> str:
        return f"({self.k},{'+' if self.sign == 1 else '-'})"

    def compose(self, first: ZAuto) -> ZAuto:
        """`self ∘ first`."""
        return ZAuto(self.k + self.sign * first.k, self.sign * first.sign)

    def inverse(self) -> ZAuto:
        return ZAuto(-self.sign * self.k, self.sign)

    @property
    def matrix(self) -> sympy.Matrix:
        """`[[1,0],[k,±1]]`, conjugating the idempotent matrix of a triple."""
        return sympy.Matrix([[1, 0], [self.k, self.sign]])


Word = tuple[ZAuto, ...]


def word_map(word: Iterable[ZAuto]) -> ZAuto:
    """The single automorphism of a word applied left to right."""
    return reduce(lambda acc, g: g.compose(acc), word, ZAuto())


@dataclass(frozen=True)
class IdempotentMatrix:
    """A 2×2 integer matrix `P` with `P·P = P` and trace 1."""

    entries: tuple[tuple[int, int], tuple[int, int]]

    def __post_init__(self) -> None:
        rows = tuple(tuple(int(v) for v in row) for row in self.entries)
        if len(rows) != 2 or any(len(row) != 2 for row in rows):
            raise ValueError(f"Expected a 2×2 matrix, got {self.entries}")
        object.__setattr__(self, "entries", rows)

        M = self.matrix
        if M.trace() != 1 or M * M != M:
            flat = (rows[0][0], rows[0][1], rows[1][0], rows[1][1])
            raise NotIdempotentTraceOne(flat)

    @classmethod
    def from_matrix(cls, M: sympy.Matrix) -> Self:
        return cls(((int(M[0, 0]), int(M[0, 1])), (int(M[1, 0]), int(M[1, 1]))))

    @property
    def matrix(self) -> sympy.Matrix:
        return sympy.Matrix(self.entries)

    def conjugate(self, g: ZAuto) -> IdempotentMatrix:
        """`g·P·g⁻¹`, the matrix of the triple transported along `g`."""
        G = g.matrix
        return IdempotentMatrix.from_matrix(G * self.matrix * G.inv())


def params_matrix_bridge(
    x: ZTrussParams | IdempotentMatrix,
) -> IdempotentMatrix | ZTrussParams:
    """`(a, b, c) ↔ [[b, a], [-c, 1-b]]`.

    Raises:
        ValueError: For the projections, which have no matrix.
    """
    if isinstance(x, IdempotentMatrix):
        (b, a), (minus_c, _) = x.entries
        return ZTrussParams.commutative(a, b, -minus_c)

    if x.variant != "commutative":
        raise ValueError(f"The {x.variant} projection has no matrix form")
    return IdempotentMatrix(((x.b, x.a), (-x.c, 1 - x.b)))


def apply_auto(p: ZTrussParams, g: ZAuto) -> ZTrussParams:
    """Transport `p` along `g`, so that `g(m·n) = g(m) ·' g(n)`.

    The projections are fixed by every automorphism.
    """
    if p.variant != "commutative":
        return p
    a, b, c, k, s = p.a, p.b, p.c, g.k, g.sign
    return ZTrussParams.commutative(
        s * a,
        b - s * a * k,
        s * (c + a * k * k) - 2 * b * k + k,
    )


def apply_word(p: ZTrussParams, word: Iterable[ZAuto]) -> ZTrussParams:
    return reduce(apply_auto, word, p)


def canonicalize(p: ZTrussParams) -> tuple[ZTrussParams, Word]:
    """The representative of the orbit of `p`.

    `a` is made non-negative with `φ_0^-`, then `b` is moved into `[0, a)` by a
    translation. For `a = 0` the translation clears `c`, leaving `(0, 0, 0)` or
    `(0, 1, 0)`. Projections are their own representative.

    Returns:
        The representative and the word carrying `p` to it
    """
    if p.variant != "commutative":
        return p, ()

    word: list[ZAuto] = []
    if p.a < 0:
        word.append(ZAuto(0, -1))
        p = apply_auto(p, word[-1])

    if p.a > 0:
        k = p.b // p.a
    elif p.b == 0:
        k = -p.c
    else:
        k = p.c

    if k != 0:
        word.append(ZAuto(k, 1))
        p = apply_auto(p, word[-1])
    return p, tuple(word)


def are_isomorphic(p: ZTrussParams, q: ZTrussParams) -> Word | None:
    """A word carrying `p` to `q`, or None when they lie in different orbits."""
    cp, wp = canonicalize(p)
    cq, wq = canonicalize(q)
    if cp != cq:
        return None
    return wp + tuple(g.inverse() for g in reversed(wq))


def type3_structures(a: int) -> list[tuple[int, int]]:
    """The pairs `(b, c)` with `2 ≤ b < a` and `ac = b(b-1)`, by increasing `b`."""
    if a < 1:
        raise ValueError(f"a must be positive, got {a}")
    return [(b, b * (b - 1) // a) for b in range(2, a) if b * (b - 1) % a == 0]


@dataclass(frozen=True)
class ZSpecial:
    """Identity and absorber of a truss on the integers."""

    unital: bool
    identity: int | None
    ring_type: bool
    absorber: int | None


def classify_special(p: ZTrussParams) -> ZSpecial:
    """Find the identity `u` and the absorber `z` when they exist.

    `p` is unital iff `b = 1 - au` and `c = u(au-1)` for an integer `u`, and of
    ring type iff `b = -az` and `c = z(az+1)` for an integer `z`.
    """
    if p.variant != "commutative":
        return ZSpecial(unital=False, identity=None, ring_type=False, absorber=None)

    a, b, c = p.triple
    if a == 0:
        identity = -c if b == 1 else None
        absorber = c if b == 0 else None
    else:
        identity = (1 - b) // a if (1 - b) % a == 0 else None
        absorber = -b // a if b % a == 0 else None

    return ZSpecial(
        unital=identity is not None,
        identity=identity,
        ring_type=absorber is not None,
        absorber=absorber,
    )


def _normal_form(p: ZTrussParams, point: int) -> tuple[ZTrussParams, Word]:
    word = [ZAuto(-point, 1)]
    p = apply_auto(p, word[0])
    if p.a < 0:
        word.append(ZAuto(0, -1))
        p = apply_auto(p, word[-1])
    return p, tuple(word)


def unital_normal_form(p: ZTrussParams) -> tuple[ZTrussParams, Word]:
    """Carry a unital `p` to `(|a|, 1, 0)` with its identity sent to `0`."""
    special = classify_special(p)
    if special.identity is None:
        raise ValueError(f"{p} has no identity")
    return _normal_form(p, special.identity)


def ring_normal_form(p: ZTrussParams) -> tuple[ZTrussParams, Word]:
    """Carry a ring-type `p` to `(|a|, 0, 0)` with its absorber sent to `0`."""
    special = classify_special(p)
    if special.absorber is None:
        raise ValueError(f"{p} has no absorber")
    return _normal_form(p, special.absorber)


def associativity_witness(
    a: int,
    b: int,
    c: int,
    bound: int = 2,
) -> tuple[int, int, int] | None:
    """The first `(k, m, n)` in `[-bound, bound]³` with `l(mn) != (lm)n`, or None.

    The triple need not satisfy the constraint, distributivity holds regardless.
    """

    def mul(m: int, n: int) -> int:
        return affine_product(a, b, c, m, n)

    for k, m, n in product(range(-bound, bound + 1), repeat=3):
        if mul(k, mul(m, n)) != mul(mul(k, m), n):
            return (k, m, n)
    return None


def zn_truss(n: int, a: int, b: int, c: int) -> FiniteTruss:
    """The truss `m·k = amk + b(m+k) + c mod n` on the heap of `ℤ_n`."""
    if (a * c - b * (b - 1)) % n != 0:
        raise ConstraintViolated((a, b, c), f"ac ≢ b(b-1) mod {n}")

    H = FiniteHeap.from_cyclic([n])
    m = np.arange(n)
    mul = (a * np.outer(m, m) + b * (m[:, None] + m[None, :]) + c) % n
    return build_truss(H, mul)


def _oracle_mul(
    params: Sequence[np.ndarray],
    m: np.ndarray | int,
    k: np.ndarray | int,
    n: int,
) -> np.ndarray:
    al, be, ga, de = params
    return (
        de * m * k - ga * m * (k - 1) - be * (m - 1) * k + al * (m - 1) * (k - 1)
    ) % n


def zn_enumerate_all(n: int) -> list[FiniteTruss]:
    """Every truss product on the heap of `ℤ_n`, by exhaustive search.

    Distributivity fixes a product by `α = 0·0`, `β = 0·1`, `γ = 1·0` and
    `δ = 1·1`, so each of the `n⁴` choices is built and kept when associative.
    Associativity is first checked on `{0, 1}³` only. The search is split by `α`.

    Returns:
        The trusses, without duplicate tables, sorted by table
    """
    cap = get_settings().max_carrier
    if n > cap:
        raise CarrierTooLarge(f"ℤ_{n} exceeds max_carrier={cap}")
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")

    H = FiniteHeap.from_cyclic([n])
    rest = np.indices((n, n, n)).reshape(3, -1)
    m = np.arange(n)
    bits = list(product((0, 1), repeat=3))

    tables: dict[bytes, np.ndarray] = {}
    for alpha in range(n):
        params = (np.full(rest.shape[1], alpha), *rest)
        ok = np.ones(rest.shape[1], dtype=bool)
        for x, y, z in bits:
            lhs = _oracle_mul(params, _oracle_mul(params, x, y, n), z, n)
            rhs = _oracle_mul(params, x, _oracle_mul(params, y, z, n), n)
            ok &= lhs == rhs

        survivors = np.flatnonzero(ok)
        logger.debug(f"ℤ_{n}, α={alpha}: {len(survivors)} pass the {{0,1}} filter")
        for i in survivors:
            single = tuple(int(p[i]) for p in params)
            table = _oracle_mul(single, m[:, None], m[None, :], n)
            if np.array_equal(table[table], table[:, table]):
                tables.setdefault(table.tobytes(), table)

    ordered = sorted(tables.values(), key=lambda t: t.ravel().tolist())
    logger.info(f"ℤ_{n} carries {len(ordered)} truss products")
    return [FiniteTruss(H, table) for table in ordered]


def oracle_parameters(T: FiniteTruss) -> tuple[int, int, int, int]:
    """`(0·0, 0·1, 1·0, 1·1)` of a truss on `ℤ_n`."""
    one = 1 % T.size
    return (T.mul(0, 0), T.mul(0, one), T.mul(one, 0), T.mul(one, one))


def commutative_parameters(T: FiniteTruss) -> tuple[int, int, int] | None:
    """`(a, b, c) mod n` of a commutative truss on `ℤ_n`, None if not commutative."""
    if not T.is_commutative:
        return None
    n = T.size
    alpha, beta, _, delta = oracle_parameters(T)
    return ((delta - 2 * beta + alpha) % n, (beta - alpha) % n, alpha % n)
