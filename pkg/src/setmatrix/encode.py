"""The set encoding of matrices.

A matrix ``[x11 ... xmn]`` becomes the function-set
``{((1,1), x11), ..., ((m,n), xmn)}``, with Kuratowski pairs and 1-based
von Neumann numerals as indices.  Sets are encoded elementwise, so the
encoding is the identity on matrix-free values.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable

from .core import EMPTY, MatrixNode, SetNode, Shape, ShapeLike, Value, mk_matrix, mk_set

__all__ = ["vn_ordinal", "kpair", "encode_zfm", "decode_zfm", "is_pure"]


@lru_cache(maxsize=None)
def vn_ordinal(k: int) -> SetNode:
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"index numerals start at 1, got {k!r}")
    if k == 1:
        return SetNode((EMPTY,))
    prev = vn_ordinal(k - 1)
    return mk_set(prev.elements + (prev,))


def kpair(a: Value, b: Value) -> SetNode:
    """Kuratowski pair ``{{a}, {a, b}}``."""
    return mk_set((mk_set((a,)), mk_set((a, b))))


@lru_cache(maxsize=None)
def _index(i: int, j: int) -> SetNode:
    return kpair(vn_ordinal(i), vn_ordinal(j))


@lru_cache(maxsize=1 << 16)
def encode_zfm(v: Value) -> SetNode:
    if isinstance(v, SetNode):
        if not v.elements:
            return v
        return mk_set(encode_zfm(e) for e in v.elements)
    shape = v.shape
    return mk_set(
        kpair(_index(i, j), encode_zfm(e)) for (i, j), e in zip(shape.cells(), v.entries)
    )


def is_pure(v: Value) -> bool:
    """No matrix occurs anywhere inside ``v``."""
    return isinstance(v, SetNode) and all(is_pure(e) for e in v.elements)


def _graph_of(s: SetNode, shape: Shape) -> list[SetNode] | None:
    # If s is exactly the function-set of some ``shape`` matrix, return the
    # (still encoded) entries in row-major order.
    if len(s.elements) != shape.size:
        return None
    by_index = {}
    for (i, j) in shape.cells():
        by_index[_index(i, j)] = (i, j)
    entries: dict[tuple[int, int], SetNode] = {}
    for p in s.elements:
        split = _unpair(p)
        if split is None:
            return None
        idx, val = split
        cell = by_index.get(idx)
        if cell is None or cell in entries:
            return None
        entries[cell] = val
    return [entries[c] for c in shape.cells()]


def _unpair(p: Value) -> tuple[Value, Value] | None:
    # Inverse of kpair on its image.
    if not isinstance(p, SetNode) or not all(isinstance(q, SetNode) for q in p.elements):
        return None
    if len(p.elements) == 1:
        (q,) = p.elements
        if len(q.elements) == 1:
            return q.elements[0], q.elements[0]
        return None
    if len(p.elements) != 2:
        return None
    small, big = sorted(p.elements, key=lambda q: len(q.elements))
    if len(small.elements) != 1 or len(big.elements) != 2:
        return None
    a = small.elements[0]
    if a not in big.elements:
        return None
    b = big.elements[0] if big.elements[1] == a else big.elements[1]
    return a, b


def decode_zfm(s: Value, shapes: Iterable[ShapeLike] = ()) -> Value:
    """Partial inverse of :func:`encode_zfm`.

    Shapes are tried in ascending ``(rows, cols)`` order and ``1x1`` is
    never admitted; a set that matches no shape is decoded elementwise.
    """
    admitted = sorted({Shape.coerce(sh) for sh in shapes if Shape.coerce(sh).size >= 2})
    return _decode(s, tuple(admitted))


def _decode(s: Value, shapes: tuple[Shape, ...]) -> Value:
    if isinstance(s, MatrixNode):
        return mk_matrix(s.shape, [_decode(e, shapes) for e in s.entries])
    for shape in shapes:
        entries = _graph_of(s, shape)
        if entries is not None:
            return mk_matrix(shape, [_decode(e, shapes) for e in entries])
    if not s.elements:
        return s
    return mk_set(_decode(e, shapes) for e in s.elements)
