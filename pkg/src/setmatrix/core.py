"""Canonical values: hereditarily finite sets with set-matrix urelements.

A value is either a :class:`SetNode` (a duplicate-free, sorted tuple of
values) or a :class:`MatrixNode` (an ``m x n`` grid of values with
``m * n >= 2``).  The constructors :func:`mk_set` and :func:`mk_matrix`
are the only way to build values, and they keep every value in canonical
form.  In particular a ``1 x 1`` matrix is never stored: it *is* its entry.

Because of canonical form, equality is structural and membership is a
binary search.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

__all__ = [
    "SMTError",
    "ShapeError",
    "ArityError",
    "SortError",
    "GuardViolation",
    "Shape",
    "Value",
    "SetNode",
    "MatrixNode",
    "EMPTY",
    "mk_set",
    "mk_matrix",
    "eq",
    "mem",
    "is_set",
    "is_matrix",
]


class SMTError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(SMTError, ValueError):
    pass


class ArityError(SMTError, ValueError):
    pass


class SortError(SMTError, TypeError):
    """An operation that needs a set was handed a matrix."""


class GuardViolation(SMTError):
    """The union guard failed: some element of the argument is not a set."""

    def __init__(self, element: "Value", message: str | None = None):
        self.element = element
        super().__init__(message or f"element is not a set: {element!r}")


@dataclass(frozen=True, order=True)
class Shape:
    rows: int
    cols: int

    def __post_init__(self):
        if not isinstance(self.rows, int) or not isinstance(self.cols, int):
            raise ShapeError(f"shape dimensions must be integers, got {self.rows!r}x{self.cols!r}")
        if self.rows < 1 or self.cols < 1:
            raise ShapeError(f"shape dimensions must be positive, got {self.rows}x{self.cols}")

    @property
    def size(self) -> int:
        return self.rows * self.cols

    def cells(self) -> list[tuple[int, int]]:
        """1-based ``(i, j)`` index pairs in row-major order."""
        return [(i, j) for i in range(1, self.rows + 1) for j in range(1, self.cols + 1)]

    def __str__(self) -> str:
        return f"{self.rows}x{self.cols}"

    @classmethod
    def parse(cls, text: str) -> "Shape":
        parts = text.strip().lower().split("x")
        if len(parts) != 2 or not all(p.strip().isdigit() for p in parts):
            raise ShapeError(f"malformed shape {text!r}; expected MxN")
        return cls(int(parts[0]), int(parts[1]))

    @classmethod
    def coerce(cls, obj: "ShapeLike") -> "Shape":
        if isinstance(obj, Shape):
            return obj
        if isinstance(obj, str):
            return cls.parse(obj)
        rows, cols = obj
        return cls(rows, cols)


ShapeLike = Union[Shape, str, Sequence[int]]


class Value:
    """A canonical value.  Ordered by the total value order, hashed by structure."""

    __slots__ = ("_key", "_hash")

    # _key layout: (0, n, child keys) for sets, (1, rows, cols, child keys) for
    # matrices.  Tuple comparison on keys is exactly the value order.
    _key: tuple
    _hash: int

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Value):
            return NotImplemented
        return self._hash == other._hash and self._key == other._key

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self):
        return self._hash

    def __lt__(self, other: "Value"):
        return self._key < other._key

    def __le__(self, other: "Value"):
        return self is other or self._key <= other._key

    def __gt__(self, other: "Value"):
        return self._key > other._key

    def __ge__(self, other: "Value"):
        return self is other or self._key >= other._key

    def __repr__(self):
        from .textio import to_text

        return f"<{type(self).__name__} {to_text(self)}>"

    def __str__(self):
        from .textio import to_text

        return to_text(self)


class SetNode(Value):
    __slots__ = ("elements",)
    elements: tuple[Value, ...]

    def __init__(self, elements: tuple[Value, ...]):
        # Callers guarantee `elements` is strictly increasing.
        self.elements = elements
        self._key = (0, len(elements), tuple(e._key for e in elements))
        self._hash = hash(self._key)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


class MatrixNode(Value):
    __slots__ = ("shape", "entries")
    shape: Shape
    entries: tuple[Value, ...]

    def __init__(self, shape: Shape, entries: tuple[Value, ...]):
        self.shape = shape
        self.entries = entries
        self._key = (1, shape.rows, shape.cols, tuple(e._key for e in entries))
        self._hash = hash(self._key)

    def entry(self, i: int, j: int) -> Value:
        """Entry at 1-based row ``i``, column ``j``."""
        return self.entries[(i - 1) * self.shape.cols + (j - 1)]

    def rows(self) -> list[tuple[Value, ...]]:
        n = self.shape.cols
        return [self.entries[r * n:(r + 1) * n] for r in range(self.shape.rows)]


EMPTY = SetNode(())


def _check_value(v) -> Value:
    if not isinstance(v, Value):
        raise TypeError(f"expected a Value, got {type(v).__name__}")
    return v


def mk_set(elems: Iterable[Value]) -> SetNode:
    """Build the set of ``elems``: duplicates dropped, elements sorted."""
    items = sorted({_check_value(e) for e in elems})
    if not items:
        return EMPTY
    return SetNode(tuple(items))


def _set_from_sorted(elems: tuple[Value, ...]) -> SetNode:
    # Fast path for producers that already hold a strictly increasing tuple.
    return SetNode(elems) if elems else EMPTY


def mk_matrix(shape: ShapeLike, entries: Sequence[Value]) -> Value:
    """Build a ``rows x cols`` matrix.  A ``1 x 1`` matrix is its own entry."""
    shape = Shape.coerce(shape)
    entries = tuple(entries)
    if len(entries) != shape.size:
        raise ArityError(f"a {shape} matrix needs {shape.size} entries, got {len(entries)}")
    for e in entries:
        _check_value(e)
    if shape.size == 1:
        return entries[0]
    return MatrixNode(shape, entries)


def eq(a: Value, b: Value) -> bool:
    return a == b


def mem(a: Value, b: Value) -> bool:
    """``a`` is an element of ``b``.  Matrices have no elements."""
    if not isinstance(b, SetNode):
        return False
    elems = b.elements
    i = bisect_left(elems, a)
    return i < len(elems) and elems[i] == a


def is_set(a: Value) -> bool:
    return isinstance(a, SetNode)


def is_matrix(a: Value) -> bool:
    return isinstance(a, MatrixNode)
