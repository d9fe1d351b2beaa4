"""Command-line front end.

Exit codes: 0 true / all hold, 1 false / some verdict fails, 2 parse or
usage error, 3 sort or guard violation, 4 universe cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .core import GuardViolation, SetNode, Shape, ShapeError, SortError, eq, mem
from .encode import encode_zfm
from .logic.check import check_schema
from .logic.schemas import (
    MAPS,
    PREDICATES,
    SCHEMA_NAMES,
    SchemaError,
    canonical_name,
    instantiate_schema,
    schema_kind,
    schema_summary,
    suite_instances,
)
from .logic.universe import DEFAULT_CAP, LimitError, enum_universe, set_rank
from .setops import is_ordinal, is_transitive_i, is_transitive_ii, is_transitive_iii, matrices_over
from .textio import ParseError, parse, to_text

EXIT_TRUE, EXIT_FALSE, EXIT_USAGE, EXIT_SORT, EXIT_LIMIT = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _read_term(text: str):
    if text == "-":
        text = sys.stdin.read()
    return parse(text)


def _shapes(text: str | None) -> list[Shape]:
    if not text:
        return []
    return [Shape.parse(s) for s in text.split(",") if s.strip()]


def _bool(value: bool) -> int:
    print("true" if value else "false")
    return EXIT_TRUE if value else EXIT_FALSE


# ------------------------------------------------------------------ commands


def cmd_norm(args) -> int:
    print(to_text(_read_term(args.term)))
    return EXIT_TRUE


def cmd_eq(args) -> int:
    return _bool(eq(_read_term(args.a), _read_term(args.b)))


def cmd_mem(args) -> int:
    return _bool(mem(_read_term(args.a), _read_term(args.b)))


def cmd_encode(args) -> int:
    enc = encode_zfm(_read_term(args.term))
    print(to_text(enc))
    if args.expand:
        print(f"elements: {len(enc.elements)}")
        print(f"depth: {set_rank(enc)}")
    return EXIT_TRUE


_TRANSITIVE = {"i": is_transitive_i, "ii": is_transitive_ii, "iii": is_transitive_iii}


def cmd_transitive(args) -> int:
    return _bool(_TRANSITIVE[args.definition](_read_term(args.term)))


def cmd_ordinal(args) -> int:
    return _bool(is_ordinal(_read_term(args.term)))


def _universe(args):
    return enum_universe(args.rank, _shapes(args.shapes), args.depth, cap=args.cap)


def cmd_enum(args) -> int:
    u = _universe(args)
    for v in u.values:
        print(to_text(v))
    print(f"count {len(u.values)}")
    return EXIT_TRUE


def cmd_matrices_over(args) -> int:
    x = _read_term(args.term)
    result = matrices_over(x, Shape.parse(args.shape))
    elems = result.elements if isinstance(result, SetNode) else ()
    for v in elems:
        print(to_text(v))
    print(f"count {len(elems)}")
    return EXIT_TRUE


def _schema_instances(args):
    """Schema instances selected by --schema/--params/--shapes/--phi/--map."""
    name = canonical_name(args.schema)
    kind = schema_kind(name)
    shapes = _shapes(args.shapes)
    explicit = _shapes(args.params)
    if kind in ("phi", "map"):
        if explicit:
            raise UsageError(f"{name} takes no shape parameters")
        lib, chosen = (PREDICATES, args.phi) if kind == "phi" else (MAPS, args.map)
        names = [chosen] if chosen else list(lib)
        return [instantiate_schema(name, phi=n) for n in names]
    if args.phi or args.map:
        raise UsageError(f"{name} takes no --phi or --map")
    if explicit:
        return [instantiate_schema(name, explicit)]
    if kind == "none":
        return [instantiate_schema(name)]
    if kind == "pair":
        big = [s for s in shapes if s.size >= 2]
        pairs = [(s, t) for s in big for t in big if s != t]
        if not pairs:
            raise UsageError(f"{name} needs two distinct shapes; pass --params MxN,PxQ")
        return [instantiate_schema(name, p) for p in pairs]
    usable = [s for s in shapes if kind == "shape" or s.size >= 2]
    if not usable:
        raise UsageError(f"{name} needs a shape; pass --shapes or --params")
    return [instantiate_schema(name, [s]) for s in usable]


def cmd_check(args) -> int:
    if bool(args.schema) == bool(args.suite):
        raise UsageError("give exactly one of --schema NAME or --suite smt|smt-minus")
    u = _universe(args)
    if args.suite:
        instances = suite_instances(args.suite, args.bound)
    else:
        instances = _schema_instances(args)
    verdicts = [check_schema(s, u=u, model=args.model, engine=args.engine) for s in instances]
    if args.json:
        print(json.dumps([v.to_dict() for v in verdicts], ensure_ascii=False))
    else:
        for v in verdicts:
            line = f"{v.label}\t{v.model}\t{'holds' if v.holds else 'fails'}"
            if v.witness:
                line += "\t" + " ".join(f"{k}={to_text(w)}" for k, w in v.witness.items())
            print(line)
        held = sum(v.holds for v in verdicts)
        print(f"{held}/{len(verdicts)} hold")
    return EXIT_TRUE if all(v.holds for v in verdicts) else EXIT_FALSE


def cmd_schemas(args) -> int:
    for name in SCHEMA_NAMES:
        print(f"{name}\t{schema_kind(name)}\t{schema_summary(name)}")
    print("predicates: " + ", ".join(PREDICATES))
    print("maps: " + ", ".join(MAPS))
    return EXIT_TRUE


# ------------------------------------------------------------------ parser


def _add_universe(p: argparse.ArgumentParser, *, with_shapes=True):
    p.add_argument("--rank", type=int, default=1, help="set-rank bound (default 1)")
    p.add_argument("--depth", type=int, default=1, help="matrix nesting bound (default 1)")
    if with_shapes:
        p.add_argument(
            "--shapes", default="1x2,2x1,2x2", help="comma-separated MxN shapes (default 1x2,2x1,2x2)"
        )
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help=f"universe size cap (default {DEFAULT_CAP})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="setmatrix",
        description="Set matrix terms, their set encoding, and bounded schema checks.",
        epilog="Terms use {a,b} for sets and [a,b;c,d] for matrices; '-' reads a term from stdin.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("norm", help="print the canonical form of a term")
    p.add_argument("term")
    p.set_defaults(func=cmd_norm)

    for name, fn, what in (("eq", cmd_eq, "equal"), ("mem", cmd_mem, "an element of")):
        p = sub.add_parser(name, help=f"is A {what} B? (exit 0 true, 1 false)")
        p.add_argument("a")
        p.add_argument("b")
        p.set_defaults(func=fn)

    p = sub.add_parser("encode", help="print the set encoding of a term")
    p.add_argument("term")
    p.add_argument("--expand", action="store_true", help="also print element count and depth")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("transitive", help="is the set transitive under definition i, ii or iii?")
    p.add_argument("--def", dest="definition", choices=["i", "ii", "iii"], default="ii")
    p.add_argument("term")
    p.set_defaults(func=cmd_transitive)

    p = sub.add_parser("ordinal", help="is the set an ordinal?")
    p.add_argument("term")
    p.set_defaults(func=cmd_ordinal)

    p = sub.add_parser("enum", help="list a bounded universe")
    _add_universe(p)
    p.set_defaults(func=cmd_enum)

    p = sub.add_parser("matrices-over", help="all matrices of a shape with entries in a set")
    p.add_argument("term")
    p.add_argument("--shape", required=True, help="MxN")
    p.set_defaults(func=cmd_matrices_over)

    lib = (
        "predicates for separation (--phi): "
        + ", ".join(f"{k} [{v.doc}]" for k, v in PREDICATES.items())
        + "; maps for replacement (--map): "
        + ", ".join(f"{k} [{v.doc}]" for k, v in MAPS.items())
    )
    p = sub.add_parser(
        "check",
        help="check one schema or a whole theory in a bounded model",
        description="Check schemas in a bounded universe. " + lib,
    )
    which = p.add_argument_group("what to check")
    which.add_argument("--schema", help="schema name (see the 'schemas' command)")
    which.add_argument("--suite", choices=["smt", "smt-minus"], help="check every schema of a theory")
    which.add_argument("--params", help="explicit schema shapes, e.g. 1x2 or 1x2,2x1")
    which.add_argument("--phi", choices=list(PREDICATES), help="separation predicate")
    which.add_argument("--map", choices=list(MAPS), help="replacement map")
    which.add_argument("--bound", default="2x2", help="largest shape in a suite (default 2x2)")
    p.add_argument("--model", choices=["native", "zfm", "zfm-image"], default="native")
    p.add_argument("--engine", choices=["kernel", "reference"], default="kernel")
    p.add_argument("--json", action="store_true", help="emit the verdict list as JSON")
    _add_universe(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("schemas", help="list schema names and the predicate/map library")
    p.set_defaults(func=cmd_schemas)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error at {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, SchemaError, ShapeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GuardViolation as exc:
        print(f"guard violation: {exc}", file=sys.stderr)
        return EXIT_SORT
    except SortError as exc:
        print(f"sort error: {exc}", file=sys.stderr)
        return EXIT_SORT
    except LimitError as exc:
        print(f"limit exceeded: {exc}", file=sys.stderr)
        return EXIT_LIMIT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
