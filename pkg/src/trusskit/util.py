from __future__ import annotations

from itertools import tee
from typing import Callable, Iterable, Iterator, TypeVar

import numpy as np

T = TypeVar("T")


def pairs(itr: Iterable[T]) -> Iterator[tuple[T, T]]:
    """An iterator over pairs of items in the iterator.

    ```python
    # Check if sorted
    if all(a < b for a, b in pairs(items)):
        ...
    ```

    Args:
        itr: An itr of items

    Returns:
        An itr of sequential pairs of the items
    """
    itr1, itr2 = tee(itr)

    # Skip first item
    _ = next(itr2, None)
    return iter((a, b) for a, b in zip(itr1, itr2))


def frozen(a: Iterable[int] | np.ndarray, *, dtype: type = np.int64) -> np.ndarray:
    """A read-only integer copy of `a`."""
    arr = np.array(a, dtype=dtype)
    arr.setflags(write=False)
    return arr


def first_failure(ok: np.ndarray) -> tuple[int, ...] | None:
    """The lexicographically least index at which `ok` is False.

    Args:
        ok: A boolean array of any shape, usually the elementwise comparison of
            both sides of a law over a full grid of elements.

    Returns:
        The index tuple of the first failure in C order, or None if all hold.
    """
    if ok.all():
        return None
    flat = int(np.argmin(ok.ravel()))
    return tuple(int(i) for i in np.unravel_index(flat, ok.shape))


def closure(
    start: Iterable[int],
    step: Callable[[np.ndarray], np.ndarray],
) -> tuple[int, ...]:
    """Smallest superset of `start` closed under `step`.

    Args:
        start: The initial elements
        step: Given the sorted members so far, returns every element they produce
            in one round. The members themselves need not be included.

    Returns:
        The sorted members of the fixpoint
    """
    members = np.unique(np.fromiter(start, dtype=np.int64))
    while True:
        grown = np.union1d(members, step(members).ravel())
        if len(grown) == len(members):
            return tuple(int(m) for m in members)
        members = grown
