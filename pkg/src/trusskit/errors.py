"""Errors raised when a table fails an axiom or an argument is out of range.

Axiom failures carry the name of the law that broke together with the
lexicographically least tuple of elements witnessing it, so that reports are
reproducible between runs.
"""
from __future__ import annotations

from typing import Any, ClassVar


class TrussKitError(Exception):
    """Root of every error raised by trusskit."""


class AxiomError(TrussKitError, ValueError):
    """A table or map does not satisfy a named law."""

    axiom: ClassVar[str] = "Axiom"
    """The name of the violated law, used in reports."""

    def __init__(self, witness: tuple[Any, ...] = (), detail: str | None = None):
        self.witness = tuple(int(w) if hasattr(w, "__index__") else w for w in witness)
        self.detail = detail
        msg = f"{self.axiom} witness {self.witness}"
        if detail is not None:
            msg = f"{msg}: {detail}"
        super().__init__(msg)

    def __init_subclass__(cls, **kwargs: Any) -> None:
        super().__init_subclass__(**kwargs)
        cls.axiom = cls.__name__


ValidationError = AxiomError


# Heaps
class NotAGroup(AxiomError):
    """The retract table fails a group axiom."""


class NotMalcev(AxiomError):
    """A ternary table violates [x,x,y]=y or [y,x,x]=y."""


class NotAbelian(AxiomError):
    """Commutativity or the symmetry [x,y,z]=[z,y,x] fails."""


class Inconsistent(AxiomError):
    """A ternary table differs from the bracket induced by its retract."""


class NotSubHeap(AxiomError):
    """A subset is not closed under the bracket."""


class NotInImage(AxiomError):
    """The element is not in the image of the map."""


class NotHeapMorphism(AxiomError):
    """A map does not preserve the bracket."""


class NotEndomorphism(AxiomError):
    """A self map of a heap does not preserve the bracket."""


# Trusses
class NotAssociative(AxiomError):
    """(xy)z differs from x(yz)."""


class NotLeftDistributive(AxiomError):
    """w[x,y,z] differs from [wx,wy,wz]."""


class NotRightDistributive(AxiomError):
    """[x,y,z]w differs from [xw,yw,zw]."""


class NotParagon(AxiomError):
    """A sub-heap is not closed under the canonical actions."""


class NotSubTruss(AxiomError):
    """A sub-heap is not closed under the product."""


class NotCentral(AxiomError):
    """The element does not commute with every other element."""


class NotTrussMorphism(AxiomError):
    """A map does not preserve the product."""


class NotBijective(AxiomError):
    """Two elements share an image, or the map misses an element."""


# Constructions
class NotIdempotent(AxiomError):
    """α∘α differs from α."""


class NotAdditive(AxiomError):
    """α(x+y) differs from α(x)+α(y)."""


class NotInKernel(AxiomError):
    """α(a) is not the neutral element."""


class NotIdempotentMatrix(AxiomError):
    """E·E differs from E."""


class NotClosed(AxiomError):
    """A set of endomorphisms is not closed under composition or bracket."""


# Integers
class ConstraintViolated(AxiomError):
    """ac differs from b(b-1)."""


class NotIdempotentTraceOne(AxiomError):
    """A 2x2 matrix is not idempotent of trace one."""


class NotOrdinaryIntegers(AxiomError):
    """The parameters are not isomorphic to the usual product on the integers."""


# Modules
class NotAssociativeAction(AxiomError):
    """(xy)▷m differs from x▷(y▷m)."""


class NotHeapDistributive(AxiomError):
    """x▷[m,m',m''] differs from [x▷m,x▷m',x▷m'']."""


class NotTrussDistributive(AxiomError):
    """[x,y,z]▷m differs from [x▷m,y▷m,z▷m]."""


class NotInducedSubmodule(AxiomError):
    """A sub-heap is not closed under the induced action."""


class NotBimodule(AxiomError):
    """x▷(m◁y) differs from (x▷m)◁y."""


class NotModuleMorphism(AxiomError):
    """φ(x▷m) differs from x▷φ(m)."""


class CompositionLawViolated(AxiomError):
    """ε∘ι or ι∘ε differs from ε."""


class IndexOutOfRange(TrussKitError, ValueError, IndexError):
    """An element index is outside the carrier."""


class EvenLength(TrussKitError, ValueError):
    """A multibracket was given an even number of items."""


class EmptyGenerator(TrussKitError, ValueError):
    """A closure was asked for the structure generated by the empty set."""


class CarrierTooLarge(TrussKitError, ValueError):
    """A carrier or enumeration exceeds the configured cap."""


class LabelMismatch(TrussKitError, ValueError):
    """The number of labels does not match the carrier."""


class ParseError(TrussKitError, ValueError):
    """A structure document could not be parsed."""


class UnknownCommand(TrussKitError, ValueError):
    """The cli was given a command it does not know."""


class BadArguments(TrussKitError, ValueError):
    """The cli arguments are malformed for the command."""


def check_index(n: int, *elements: int) -> None:
    """Raise IndexOutOfRange unless every element lies in `0..n-1`."""
    for x in elements:
        if not 0 <= int(x) < n:
            raise IndexOutOfRange(f"Element {x} outside carrier of size {n}")
