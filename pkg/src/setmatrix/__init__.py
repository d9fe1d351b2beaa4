"""Set matrix values, their set encoding, and a bounded schema checker."""

from .core import (
    EMPTY,
    ArityError,
    GuardViolation,
    MatrixNode,
    SetNode,
    Shape,
    ShapeError,
    SMTError,
    SortError,
    Value,
    eq,
    is_matrix,
    is_set,
    mem,
    mk_matrix,
    mk_set,
)
from .encode import decode_zfm, encode_zfm, kpair, vn_ordinal
from .setops import (
    Predicate,
    TotalMap,
    empty,
    infinity_stage,
    is_ordinal,
    is_transitive_i,
    is_transitive_ii,
    is_transitive_iii,
    matrices_over,
    pair_set,
    powerset,
    replacement,
    separation,
    union,
)
from .textio import JSONFormatError, ParseError, from_json, parse, to_json, to_text

__version__ = "0.1.0"
