"""Formulas, bounded universes, models and the schema checker."""

from .check import ENGINES, Verdict, check_schema, check_suite, replay
from .formula import *  # noqa: F401,F403
from .formula import __all__ as _formula_all
from .schemas import (
    MAPS,
    PREDICATES,
    SCHEMA_NAMES,
    THEORIES,
    Schema,
    SchemaError,
    instantiate_schema,
    suite_instances,
)
from .semantics import EvaluationError, Semantics, evaluate, first_counterexample, semantics
from .universe import DEFAULT_CAP, LimitError, Universe, enum_universe, matrix_depth, set_rank

__all__ = list(_formula_all) + [
    "ENGINES",
    "Verdict",
    "check_schema",
    "check_suite",
    "replay",
    "MAPS",
    "PREDICATES",
    "SCHEMA_NAMES",
    "THEORIES",
    "Schema",
    "SchemaError",
    "instantiate_schema",
    "suite_instances",
    "EvaluationError",
    "Semantics",
    "evaluate",
    "first_counterexample",
    "semantics",
    "DEFAULT_CAP",
    "LimitError",
    "Universe",
    "enum_universe",
    "matrix_depth",
    "set_rank",
]
