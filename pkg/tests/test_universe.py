import pytest

from setmatrix.core import EMPTY, mk_matrix, mk_set
from setmatrix.logic import DEFAULT_CAP, LimitError, enum_universe, matrix_depth, set_rank
from setmatrix.textio import parse

import oracles

SHAPES3 = ["1x2", "2x1", "2x2"]


def test_small_examples():
    assert list(enum_universe(1, [], 0).values) == [EMPTY, mk_set([EMPTY])]
    assert list(enum_universe(0, ["1x2"], 1).values) == [EMPTY, mk_matrix((1, 2), [EMPTY, EMPTY])]
    assert list(enum_universe(0, [], 0).values) == [EMPTY]


@pytest.mark.parametrize(
    "r, d, size",
    [(0, 0, 1), (0, 1, 4), (1, 0, 2), (2, 0, 4), (1, 1, 40)],
)
def test_sizes_with_three_shapes(r, d, size):
    assert len(enum_universe(r, SHAPES3, d)) == size


@pytest.mark.parametrize(
    "r, shapes, d",
    [
        (0, SHAPES3, 1),
        (1, SHAPES3, 1),
        (2, [], 0),
        (3, [], 0),
        (2, ["1x2"], 1),
        (1, ["1x2"], 2),
        (0, ["1x2", "1x3"], 2),
    ],
)
def test_matches_fixpoint_oracle(r, shapes, d):
    u = enum_universe(r, shapes, d)
    parsed = [tuple(map(int, s.split("x"))) for s in shapes]
    want = oracles.universe(r, parsed, d)
    got = [oracles.to_naive(v) for v in u.values]
    assert len(got) == len(set(got))
    assert set(got) == want


def test_values_sorted_and_sets_listed():
    u = enum_universe(1, SHAPES3, 1)
    assert list(u.values) == sorted(u.values)
    assert all(isinstance(s, type(EMPTY)) for s in u.sets)
    assert len(u.sets) == 16


def test_rank_and_depth():
    v = parse("{[{},{{}}],{}}")
    assert set_rank(v) == 2
    assert matrix_depth(v) == 1
    assert matrix_depth(parse("[[{},{}],{}]")) == 2
    assert set_rank(parse("[{},{}]")) == 0


def test_cap():
    with pytest.raises(LimitError) as info:
        enum_universe(2, SHAPES3, 1)
    err = info.value
    assert err.cap == DEFAULT_CAP == 20000
    assert err.needed > err.cap
    assert "20000" in str(err)


def test_cap_raise_admits_bigger():
    assert len(enum_universe(2, ["1x2"], 1, cap=300)) == 272
    with pytest.raises(LimitError):
        enum_universe(2, ["1x2"], 1, cap=271)


@pytest.mark.parametrize("args", [(-1,), (1, [], -1), (1, [], 0, 0)])
def test_bad_arguments(args):
    with pytest.raises(ValueError):
        enum_universe(*args)


def test_unit_shape_is_ignored():
    assert enum_universe(1, ["1x1"], 1).values == enum_universe(1, [], 1).values
