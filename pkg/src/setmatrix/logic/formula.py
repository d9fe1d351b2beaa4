"""Two-sorted first-order formulas.

Roman variables (:class:`SetVar`) range over sets; Greek variables
(:class:`MatVar`) range over every value, since a set is its own ``1x1``
matrix.  Besides the usual connectives and quantifiers there are bounded
quantifiers (:class:`ForallIn`, :class:`ExistsIn`) whose range is the
members of a term rather than the universe.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

from ..core import Shape

__all__ = [
    "Term",
    "Var",
    "SetVar",
    "MatVar",
    "EmptyConst",
    "EMPTY_CONST",
    "MatrixTerm",
    "Formula",
    "Mem",
    "Equal",
    "Not",
    "And",
    "Or",
    "Implies",
    "Iff",
    "Quant",
    "ForallSet",
    "ExistsSet",
    "ForallMat",
    "ExistsMat",
    "ForallIn",
    "ExistsIn",
    "Forall",
    "Exists",
    "free_vars",
    "term_vars",
    "validate",
    "matrix_of",
    "strip_unit",
    "FormulaError",
]

_SUBSCRIPTS = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


class FormulaError(ValueError):
    pass


# --------------------------------------------------------------------- terms


@dataclass(frozen=True)
class Var:
    name: str

    is_set_sort = False

    def __str__(self):
        head = self.name.rstrip("0123456789")
        return head + self.name[len(head):].translate(_SUBSCRIPTS)


@dataclass(frozen=True)
class SetVar(Var):
    is_set_sort = True


@dataclass(frozen=True)
class MatVar(Var):
    is_set_sort = False


@dataclass(frozen=True)
class EmptyConst:
    def __str__(self):
        return "∅"


EMPTY_CONST = EmptyConst()


@dataclass(frozen=True)
class MatrixTerm:
    shape: Shape
    subterms: tuple

    def __post_init__(self):
        if len(self.subterms) != self.shape.size:
            raise FormulaError(
                f"a {self.shape} matrix term needs {self.shape.size} subterms, "
                f"got {len(self.subterms)}"
            )

    def __str__(self):
        cols = self.shape.cols
        rows = [
            " ".join(str(t) for t in self.subterms[r * cols:(r + 1) * cols])
            for r in range(self.shape.rows)
        ]
        return "[" + " ; ".join(rows) + "]"


Term = Union[Var, EmptyConst, MatrixTerm]


def matrix_of(shape, terms) -> MatrixTerm:
    return MatrixTerm(Shape.coerce(shape), tuple(terms))


def strip_unit(t: Term) -> Term:
    """Drop ``1x1`` wrappers everywhere; both models interpret them as identity."""
    if isinstance(t, MatrixTerm):
        if t.shape.size == 1:
            return strip_unit(t.subterms[0])
        return MatrixTerm(t.shape, tuple(strip_unit(s) for s in t.subterms))
    return t


def term_vars(t: Term) -> Iterator[Var]:
    if isinstance(t, Var):
        yield t
    elif isinstance(t, MatrixTerm):
        for s in t.subterms:
            yield from term_vars(s)


# ------------------------------------------------------------------ formulas


@dataclass(frozen=True)
class Mem:
    left: Term
    right: Term

    def __str__(self):
        return f"{self.left} ∈ {self.right}"


@dataclass(frozen=True)
class Equal:
    left: Term
    right: Term

    def __str__(self):
        return f"{self.left} = {self.right}"


@dataclass(frozen=True)
class Not:
    body: "Formula"

    def __str__(self):
        if isinstance(self.body, Mem):
            return f"{self.body.left} ∉ {self.body.right}"
        if isinstance(self.body, Equal):
            return f"{self.body.left} ≠ {self.body.right}"
        return f"¬{_wrap(self.body)}"


@dataclass(frozen=True)
class And:
    parts: tuple

    def __init__(self, *parts):
        object.__setattr__(self, "parts", tuple(parts))

    def __str__(self):
        return " ∧ ".join(_wrap(p) for p in self.parts) if self.parts else "⊤"


@dataclass(frozen=True)
class Or:
    parts: tuple

    def __init__(self, *parts):
        object.__setattr__(self, "parts", tuple(parts))

    def __str__(self):
        return " ∨ ".join(_wrap(p) for p in self.parts) if self.parts else "⊥"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return f"{_wrap(self.left)} ⇒ {_wrap(self.right)}"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return f"{_wrap(self.left)} ⇔ {_wrap(self.right)}"


@dataclass(frozen=True)
class Quant:
    var: Var
    body: "Formula"

    forall = True
    symbol = "∀"

    def __str__(self):
        return f"{self.symbol}{self.var}{_quant_tail(self.body)}"


def _quant_tail(body) -> str:
    if isinstance(body, Quant) and not isinstance(body, (ForallIn, ExistsIn)):
        return str(body)
    return f"({body})"


@dataclass(frozen=True)
class ForallSet(Quant):
    var: SetVar
    forall = True
    symbol = "∀"


@dataclass(frozen=True)
class ExistsSet(Quant):
    var: SetVar
    forall = False
    symbol = "∃"


@dataclass(frozen=True)
class ForallMat(Quant):
    var: MatVar
    forall = True
    symbol = "∀"


@dataclass(frozen=True)
class ExistsMat(Quant):
    var: MatVar
    forall = False
    symbol = "∃"


@dataclass(frozen=True)
class ForallIn:
    """``∀v ∈ t: body``, with ``v`` ranging over the members of ``t`` of its sort."""

    var: Var
    bound: Term
    body: "Formula"
    forall = True

    def __str__(self):
        return f"∀{self.var}∈{self.bound}({self.body})"


@dataclass(frozen=True)
class ExistsIn:
    var: Var
    bound: Term
    body: "Formula"
    forall = False

    def __str__(self):
        return f"∃{self.var}∈{self.bound}({self.body})"


Formula = Union[Mem, Equal, Not, And, Or, Implies, Iff, Quant, ForallIn, ExistsIn]


def _wrap(f) -> str:
    if isinstance(f, (Mem, Equal, Not, Quant, ForallIn, ExistsIn)):
        return str(f)
    if isinstance(f, (And, Or)) and len(f.parts) <= 1:
        return str(f)
    return f"({f})"


def Forall(var: Var, body) -> Quant:
    """Universal quantifier of the sort matching ``var``."""
    return ForallSet(var, body) if var.is_set_sort else ForallMat(var, body)


def Exists(var: Var, body) -> Quant:
    return ExistsSet(var, body) if var.is_set_sort else ExistsMat(var, body)


# ------------------------------------------------------------------ analysis


def free_vars(f) -> frozenset:
    """Free variables of a formula or term."""
    if isinstance(f, (Var, EmptyConst, MatrixTerm)):
        return frozenset(term_vars(f))
    if isinstance(f, (Mem, Equal)):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, (And, Or)):
        out = frozenset()
        for p in f.parts:
            out |= free_vars(p)
        return out
    if isinstance(f, (Implies, Iff)):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, Quant):
        return free_vars(f.body) - {f.var}
    if isinstance(f, (ForallIn, ExistsIn)):
        return free_vars(f.bound) | (free_vars(f.body) - {f.var})
    raise FormulaError(f"not a formula: {f!r}")


def validate(f, bound: frozenset = frozenset()) -> None:
    """Check that ``f`` is closed relative to ``bound`` and sorts are consistent.

    A name may not be used both as a Roman and a Greek variable, and may
    not be bound again inside its own scope (witnesses are reported by name).
    """
    sorts: dict[str, bool] = {}

    def visit_term(t, scope):
        for v in term_vars(t):
            _note(v)
            if v.name not in scope:
                raise FormulaError(f"unbound variable {v}")

    def _note(v):
        prev = sorts.setdefault(v.name, v.is_set_sort)
        if prev != v.is_set_sort:
            raise FormulaError(f"variable {v} is used with both sorts")

    def bind(v, scope):
        _note(v)
        if v.name in scope:
            raise FormulaError(f"variable {v} is bound again inside its own scope")
        return scope | {v.name}

    def visit(g, scope):
        if isinstance(g, (Mem, Equal)):
            visit_term(g.left, scope)
            visit_term(g.right, scope)
        elif isinstance(g, Not):
            visit(g.body, scope)
        elif isinstance(g, (And, Or)):
            for p in g.parts:
                visit(p, scope)
        elif isinstance(g, (Implies, Iff)):
            visit(g.left, scope)
            visit(g.right, scope)
        elif isinstance(g, Quant):
            visit(g.body, bind(g.var, scope))
        elif isinstance(g, (ForallIn, ExistsIn)):
            visit_term(g.bound, scope)
            visit(g.body, bind(g.var, scope))
        else:
            raise FormulaError(f"not a formula: {g!r}")

    visit(f, frozenset(v.name if isinstance(v, Var) else v for v in bound))
