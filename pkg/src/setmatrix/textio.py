"""Surface syntax and JSON form for values.

Grammar (whitespace is insignificant)::

    term   := set | matrix
    set    := '{' [term (',' term)*] '}'
    matrix := '[' row (';' row)* ']'
    row    := term (',' term)*

Every parsed matrix goes through :func:`~setmatrix.core.mk_matrix`, so
``[{}]`` reads as ``{}`` and ``[[{},{}]]`` reads as the ``1x2`` matrix.
"""

from __future__ import annotations

import json
from typing import Any

from .core import EMPTY, SMTError, SetNode, Shape, Value, mk_matrix, mk_set

__all__ = ["ParseError", "JSONFormatError", "parse", "to_text", "to_jsonable", "to_json", "from_json"]


class ParseError(SMTError, ValueError):
    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        self.reason = message
        super().__init__(f"{line}:{column}: {message}")


class JSONFormatError(SMTError, ValueError):
    pass


_WS = frozenset(" \t\r\n")


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.pos = 0

    def error(self, message: str, pos: int | None = None) -> ParseError:
        pos = self.pos if pos is None else pos
        line = self.src.count("\n", 0, pos) + 1
        column = pos - (self.src.rfind("\n", 0, pos) + 1) + 1
        return ParseError(message, line, column)

    def skip(self) -> str:
        src, n = self.src, len(self.src)
        while self.pos < n and src[self.pos] in _WS:
            self.pos += 1
        return src[self.pos] if self.pos < n else ""

    def expect(self, ch: str):
        got = self.skip()
        if got != ch:
            if not got:
                raise self.error(f"unbalanced brackets: expected {ch!r} before end of input")
            raise self.error(f"expected {ch!r}, found {got!r}")
        self.pos += 1

    def term(self) -> Value:
        ch = self.skip()
        if ch == "{":
            return self.set_()
        if ch == "[":
            return self.matrix()
        if not ch:
            raise self.error("unexpected end of input, expected a term")
        if ch in "}],;":
            raise self.error(f"expected a term, found {ch!r}")
        raise self.error(f"unexpected character {ch!r}")

    def set_(self) -> Value:
        self.pos += 1
        if self.skip() == "}":
            self.pos += 1
            return EMPTY
        elems = [self.term()]
        while True:
            ch = self.skip()
            if ch == ",":
                self.pos += 1
                elems.append(self.term())
            elif ch == "}":
                self.pos += 1
                return mk_set(elems)
            elif not ch:
                raise self.error("unbalanced brackets: '{' is never closed")
            else:
                raise self.error(f"expected ',' or '}}' in set, found {ch!r}")

    def matrix(self) -> Value:
        start = self.pos
        self.pos += 1
        if self.skip() == "]":
            raise self.error("empty matrix '[]': shapes need at least one row and column", start)
        rows: list[list[Value]] = [[self.term()]]
        while True:
            ch = self.skip()
            if ch == ",":
                self.pos += 1
                rows[-1].append(self.term())
            elif ch == ";":
                self.pos += 1
                rows.append([self.term()])
            elif ch == "]":
                self.pos += 1
                break
            elif not ch:
                raise self.error("unbalanced brackets: '[' is never closed")
            else:
                raise self.error(f"expected ',', ';' or ']' in matrix, found {ch!r}")
        width = len(rows[0])
        for r, row in enumerate(rows[1:], start=2):
            if len(row) != width:
                raise self.error(
                    f"ragged matrix: row 1 has {width} entries but row {r} has {len(row)}", start
                )
        return mk_matrix(Shape(len(rows), width), [e for row in rows for e in row])


def parse(src: str) -> Value:
    """Parse one term.  Errors carry a 1-based ``line:column`` position."""
    p = _Parser(src)
    v = p.term()
    if p.skip():
        raise p.error(f"trailing input after term: {src[p.pos]!r}")
    return v


def to_text(v: Value) -> str:
    """Canonical text: no whitespace, set elements in value order."""
    out: list[str] = []
    _emit(v, out)
    return "".join(out)


def _emit(v: Value, out: list[str]):
    if isinstance(v, SetNode):
        out.append("{")
        for k, e in enumerate(v.elements):
            if k:
                out.append(",")
            _emit(e, out)
        out.append("}")
    else:
        cols = v.shape.cols
        out.append("[")
        for k, e in enumerate(v.entries):
            if k:
                out.append(";" if k % cols == 0 else ",")
            _emit(e, out)
        out.append("]")


def to_jsonable(v: Value) -> dict:
    if isinstance(v, SetNode):
        return {"kind": "set", "elems": [to_jsonable(e) for e in v.elements]}
    return {
        "kind": "matrix",
        "rows": v.shape.rows,
        "cols": v.shape.cols,
        "entries": [to_jsonable(e) for e in v.entries],
    }


def to_json(v: Value) -> str:
    return json.dumps(to_jsonable(v), separators=(",", ":"))


def from_json(data: str | bytes | dict) -> Value:
    """Inverse of :func:`to_json`; also canonicalizes non-canonical input."""
    if isinstance(data, (str, bytes, bytearray)):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise JSONFormatError(f"invalid JSON: {exc}") from None
    return _from_obj(data, "$")


def _from_obj(obj: Any, path: str) -> Value:
    if not isinstance(obj, dict):
        raise JSONFormatError(f"{path}: expected an object, got {type(obj).__name__}")
    kind = obj.get("kind")
    if kind == "set":
        _require_keys(obj, {"kind", "elems"}, path)
        elems = obj["elems"]
        if not isinstance(elems, list):
            raise JSONFormatError(f"{path}.elems: expected a list")
        return mk_set(_from_obj(e, f"{path}.elems[{i}]") for i, e in enumerate(elems))
    if kind == "matrix":
        _require_keys(obj, {"kind", "rows", "cols", "entries"}, path)
        rows, cols, entries = obj["rows"], obj["cols"], obj["entries"]
        for name, n in (("rows", rows), ("cols", cols)):
            if type(n) is not int or n < 1:
                raise JSONFormatError(f"{path}.{name}: expected a positive integer, got {n!r}")
        if not isinstance(entries, list):
            raise JSONFormatError(f"{path}.entries: expected a list")
        if len(entries) != rows * cols:
            raise JSONFormatError(
                f"{path}: rows*cols = {rows * cols} but {len(entries)} entries given"
            )
        vals = [_from_obj(e, f"{path}.entries[{i}]") for i, e in enumerate(entries)]
        return mk_matrix(Shape(rows, cols), vals)
    raise JSONFormatError(f"{path}.kind: expected 'set' or 'matrix', got {kind!r}")


def _require_keys(obj: dict, keys: set[str], path: str):
    missing = keys - obj.keys()
    if missing:
        raise JSONFormatError(f"{path}: missing field(s) {', '.join(sorted(missing))}")
    extra = obj.keys() - keys
    if extra:
        raise JSONFormatError(f"{path}: unexpected field(s) {', '.join(sorted(extra))}")
