"""Executable constructive set operations and transitivity predicates.

Each constructor returns the unique set its defining biconditional asks
for.  Arguments that must be sets are checked and a :class:`SortError` is
raised otherwise; :func:`union` additionally enforces the guard that every
element of its argument is a set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable

from .core import (
    EMPTY,
    GuardViolation,
    SetNode,
    Shape,
    ShapeLike,
    SortError,
    Value,
    _set_from_sorted,
    mem,
    mk_matrix,
    mk_set,
)

__all__ = [
    "Predicate",
    "TotalMap",
    "empty",
    "separation",
    "pair_set",
    "union",
    "powerset",
    "infinity_stage",
    "replacement",
    "matrices_over",
    "is_transitive_i",
    "is_transitive_ii",
    "is_transitive_iii",
    "is_ordinal",
]


@dataclass(frozen=True)
class Predicate:
    """A named, total boolean function on values."""

    name: str
    fn: Callable[[Value], bool] = field(compare=False)

    def __call__(self, v: Value) -> bool:
        return bool(self.fn(v))


@dataclass(frozen=True)
class TotalMap:
    """A named, total function from values to values."""

    name: str
    fn: Callable[[Value], Value] = field(compare=False)

    def __call__(self, v: Value) -> Value:
        out = self.fn(v)
        if not isinstance(out, Value):
            raise TypeError(f"map {self.name!r} returned {type(out).__name__}, not a Value")
        return out


def _need_set(x: Value, what: str = "argument") -> SetNode:
    if not isinstance(x, SetNode):
        raise SortError(f"{what} must be a set, got the matrix {x}")
    return x


def empty() -> SetNode:
    return EMPTY


def separation(x: Value, p: Callable[[Value], bool]) -> SetNode:
    x = _need_set(x)
    # A subsequence of a sorted tuple is still sorted.
    return _set_from_sorted(tuple(a for a in x.elements if p(a)))


def pair_set(a: Value, b: Value) -> SetNode:
    return mk_set((a, b))


def union(x: Value) -> SetNode:
    """Union of a set of sets.  A matrix element trips the guard."""
    x = _need_set(x)
    for z in x.elements:
        if not isinstance(z, SetNode):
            raise GuardViolation(z)
    return mk_set(b for z in x.elements for b in z.elements)


def powerset(x: Value) -> SetNode:
    x = _need_set(x)
    elems = x.elements
    subsets = [
        _set_from_sorted(combo) for k in range(len(elems) + 1) for combo in combinations(elems, k)
    ]
    return mk_set(subsets)


def infinity_stage(k: int) -> SetNode:
    """``{∅, {∅}, {{∅}}, ...}`` with ``k`` elements (singleton successor)."""
    if k < 0:
        raise ValueError(f"stage count must be non-negative, got {k}")
    out, cur = [], EMPTY
    for _ in range(k):
        out.append(cur)
        cur = SetNode((cur,))
    return mk_set(out)


def replacement(x: Value, f: Callable[[Value], Value]) -> SetNode:
    x = _need_set(x)
    return mk_set(f(a) for a in x.elements)


def matrices_over(x: Value, shape: ShapeLike) -> SetNode:
    """All ``shape`` matrices with entries in ``x``.  For ``1x1`` this is ``x``."""
    x = _need_set(x)
    shape = Shape.coerce(shape)
    if shape.size == 1:
        return x
    # product() over a sorted tuple yields entry tuples in lexicographic
    # order, which is exactly the value order for a fixed shape.
    return _set_from_sorted(
        tuple(mk_matrix(shape, entries) for entries in product(x.elements, repeat=shape.size))
    )


def is_transitive_i(x: Value) -> bool:
    x = _need_set(x)
    return all(mem(b, x) for a in x.elements if isinstance(a, SetNode) for b in a.elements)


def is_transitive_ii(x: Value) -> bool:
    x = _need_set(x)
    return all(
        isinstance(a, SetNode) and all(mem(b, x) for b in a.elements) for a in x.elements
    )


def is_transitive_iii(x: Value) -> bool:
    x = _need_set(x)
    for a in x.elements:
        # "either the empty set or there is a β with β ∈ α"
        if not (a == EMPTY or (isinstance(a, SetNode) and a.elements)):
            return False
    return is_transitive_i(x)


def is_ordinal(x: Value) -> bool:
    """Transitive in the sense of (ii) and strictly totally ordered by ∈."""
    if not is_transitive_ii(x):
        return False
    elems = x.elements
    for a in elems:
        if mem(a, a):
            return False
    for a, b in combinations(elems, 2):
        if not (mem(a, b) or mem(b, a)):
            return False
    for a in elems:
        for b in a.elements:
            for c in b.elements:
                if not mem(c, a):
                    return False
    return True
