import json

import pytest
from hypothesis import given

from setmatrix.core import EMPTY, mk_matrix, mk_set
from setmatrix.logic import enum_universe
from setmatrix.textio import JSONFormatError, ParseError, from_json, parse, to_json, to_jsonable, to_text

from strategies import values

M12 = mk_matrix((1, 2), [EMPTY, EMPTY])


def test_unit_brackets_collapse():
    assert parse("[{}]") == EMPTY
    assert parse("[[{},{}]]") == M12


def test_print_format():
    assert to_text(EMPTY) == "{}"
    assert to_text(mk_matrix((2, 1), [EMPTY, mk_set([EMPTY])])) == "[{};{{}}]"
    assert to_text(parse(" { [ {} , {} ] ,\n {} } ")) == "{{},[{},{}]}"


@pytest.mark.parametrize(
    "src, where",
    [
        ("[{},{};{}]", None),
        ("[{}", None),
        ("[]", None),
        ("{}}", None),
        ("{a}", (1, 2)),
        ("{\n  x}", (2, 3)),
        ("", None),
    ],
)
def test_parse_errors(src, where):
    with pytest.raises(ParseError) as info:
        parse(src)
    err = info.value
    assert err.line >= 1 and err.column >= 1
    if where is not None:
        assert (err.line, err.column) == where


def test_ragged_rows_message():
    with pytest.raises(ParseError, match="(?i)row"):
        parse("[{},{};{}]")


@given(values)
def test_parse_print_identity(v):
    assert parse(to_text(v)) == v


@given(values)
def test_json_round_trip(v):
    assert from_json(to_json(v)) == v


def test_json_format():
    assert json.loads(to_json(EMPTY)) == {"kind": "set", "elems": []}
    assert to_jsonable(M12) == {
        "kind": "matrix",
        "rows": 1,
        "cols": 2,
        "entries": [{"kind": "set", "elems": []}] * 2,
    }


def test_json_canonicalizes_on_ingest():
    unit = {"kind": "matrix", "rows": 1, "cols": 1, "entries": [{"kind": "set", "elems": []}]}
    assert from_json(unit) == EMPTY
    dup = {"kind": "set", "elems": [{"kind": "set", "elems": []}] * 3}
    assert from_json(dup) == mk_set([EMPTY])


@pytest.mark.parametrize(
    "bad",
    [
        {"kind": "set"},
        {"kind": "matrix", "rows": 2, "cols": 2, "entries": []},
        {"kind": "bag", "elems": []},
        {"kind": "matrix", "rows": 0, "cols": 2, "entries": []},
        [],
        "not json",
    ],
)
def test_json_validation(bad):
    with pytest.raises(JSONFormatError):
        from_json(bad if isinstance(bad, str) else json.dumps(bad))


def test_round_trip_over_universe():
    u = enum_universe(1, ["1x2"], 1)
    for v in u.values:
        assert parse(to_text(v)) == v
        assert from_json(to_json(v)) == v
