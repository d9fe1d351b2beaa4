"""Bounded universes of values.

``V(r, d)`` is the set of values of set-rank at most ``r`` and matrix depth
at most ``d`` over the admitted shapes::

    V(r, d) = {∅} ∪ P(V(r-1, d)) ∪ ⋃_shape shape-matrices over V(r, d-1)

where the power-set term is present only for ``r > 0`` and the matrix term
only for ``d > 0``.  Set-rank treats matrices as transparent (a matrix has
the rank of its highest entry) and depth counts matrix nesting, so ``V`` is
closed under taking members and entries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable

from ..core import EMPTY, MatrixNode, SetNode, SMTError, Shape, ShapeLike, Value, mk_matrix
from ..core import _set_from_sorted

__all__ = ["Universe", "LimitError", "enum_universe", "set_rank", "matrix_depth", "DEFAULT_CAP"]

DEFAULT_CAP = 20000


class LimitError(SMTError):
    """The requested universe would exceed the size cap."""

    def __init__(self, cap: int, needed: int | None = None, what: str = "universe"):
        self.cap = cap
        self.needed = needed
        if needed is None:
            msg = f"{what} exceeds the cap of {cap} values"
        else:
            msg = f"{what} needs at least {needed} values, over the cap of {cap}"
        super().__init__(msg)


@lru_cache(maxsize=1 << 16)
def set_rank(v: Value) -> int:
    if isinstance(v, SetNode):
        return 1 + max(map(set_rank, v.elements)) if v.elements else 0
    return max(map(set_rank, v.entries))


@lru_cache(maxsize=1 << 16)
def matrix_depth(v: Value) -> int:
    if isinstance(v, SetNode):
        return max(map(matrix_depth, v.elements), default=0)
    return 1 + max(map(matrix_depth, v.entries))


@dataclass(frozen=True, eq=False)
class Universe:
    rank: int
    shapes: tuple[Shape, ...]
    depth: int
    values: tuple[Value, ...]
    _index: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(self.values)})

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __contains__(self, v):
        return v in self._index

    def index(self, v: Value) -> int:
        return self._index[v]

    @property
    def sets(self) -> tuple[Value, ...]:
        return tuple(v for v in self.values if isinstance(v, SetNode))

    def describe(self) -> dict:
        return {
            "rank": self.rank,
            "depth": self.depth,
            "shapes": [str(s) for s in self.shapes],
            "size": len(self.values),
        }


def _norm_shapes(shapes: Iterable[ShapeLike]) -> tuple[Shape, ...]:
    # 1x1 matrices are their entries, so that shape adds nothing.
    return tuple(sorted({s for s in map(Shape.coerce, shapes) if s.size >= 2}))


def enum_universe(
    rank: int, shapes: Iterable[ShapeLike] = (), depth: int = 0, cap: int = DEFAULT_CAP
) -> Universe:
    if not isinstance(rank, int) or rank < 0:
        raise ValueError(f"rank must be a non-negative integer, got {rank!r}")
    if not isinstance(depth, int) or depth < 0:
        raise ValueError(f"depth must be a non-negative integer, got {depth!r}")
    if cap < 1:
        raise ValueError(f"cap must be positive, got {cap}")
    shapes = _norm_shapes(shapes)
    memo: dict[tuple[int, int], tuple[Value, ...]] = {}

    def level(r: int, d: int) -> tuple[Value, ...]:
        if (r, d) in memo:
            return memo[(r, d)]
        out: set[Value] = {EMPTY}
        if r > 0:
            below = level(r - 1, d)
            if len(below) >= 63 or 2 ** len(below) > cap:
                raise LimitError(cap, 2 ** min(len(below), 4096))
            for k in range(len(below) + 1):
                for combo in combinations(below, k):
                    out.add(_set_from_sorted(combo))
        if d > 0:
            inner = level(r, d - 1)
            for shape in shapes:
                count = len(inner) ** shape.size
                if count > cap:
                    raise LimitError(cap, count)
                for entries in product(inner, repeat=shape.size):
                    out.add(mk_matrix(shape, entries))
        if len(out) > cap:
            raise LimitError(cap, len(out))
        memo[(r, d)] = tuple(sorted(out))
        return memo[(r, d)]

    return Universe(rank, shapes, depth, level(rank, depth))
