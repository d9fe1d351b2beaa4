"""Axiom schemas as closed formulas, plus the witness rules used to check them.

Every constructive schema ``... ∃w ...`` carries a builder for ``w``: the
checker constructs the witness with the matching operation from
:mod:`setmatrix.setops` (or the matrix constructor) and then verifies the
defining biconditional over the universe.  The witness may lie outside the
universe, which is the point: a power set of a universe member usually does.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from ..core import EMPTY, SMTError, Shape, ShapeLike, Value, mk_matrix, mk_set
from .. import setops
from .formula import (
    EMPTY_CONST,
    And,
    Equal,
    Exists,
    ExistsIn,
    ExistsMat,
    ExistsSet,
    Forall,
    ForallMat,
    ForallSet,
    Iff,
    Implies,
    MatVar,
    MatrixTerm,
    Mem,
    Not,
    Or,
    SetVar,
    Var,
)

__all__ = [
    "SchemaError",
    "Schema",
    "LibPredicate",
    "LibMap",
    "PREDICATES",
    "MAPS",
    "SCHEMA_NAMES",
    "THEORIES",
    "instantiate_schema",
    "suite_instances",
    "shapes_up_to",
]


class SchemaError(SMTError, ValueError):
    pass


Builder = Callable[[Mapping[str, Value], object], Value]


@dataclass(frozen=True)
class Schema:
    name: str
    params: tuple[Shape, ...]
    phi: str | None
    formula: object
    witnesses: Mapping[str, Builder] = field(default_factory=dict, compare=False)
    # Witnesses given by a term rather than a construction; the kernel binds
    # them directly instead of calling back into Python.
    witness_terms: Mapping[str, object] = field(default_factory=dict, compare=False)

    @property
    def label(self) -> str:
        out = self.name
        if self.params:
            out += "(" + ",".join(str(s) for s in self.params) + ")"
        if self.phi:
            out += f"[{self.phi}]"
        return out

    def __str__(self):
        return f"{self.label}: {self.formula}"


# ------------------------------------------------------------ Φ library


@dataclass(frozen=True)
class LibPredicate:
    name: str
    formula: Callable[[Var], object]
    fn: Callable[[Value, object], bool]
    doc: str


@dataclass(frozen=True)
class LibMap:
    name: str
    graph: Callable[[Var, Var], object]
    fn: Callable[[Value, object], Value]
    doc: str


def _is_set_formula(a: Var):
    return ExistsSet(SetVar("u"), Equal(SetVar("u"), a))


PREDICATES: dict[str, LibPredicate] = {
    p.name: p
    for p in (
        LibPredicate("is-set", _is_set_formula, lambda v, sem: sem.is_set(v), "∃u(u = α)"),
        LibPredicate(
            "is-empty", lambda a: Equal(a, EMPTY_CONST), lambda v, sem: sem.eq(v, EMPTY), "α = ∅"
        ),
        LibPredicate(
            "is-matrix",
            lambda a: Not(_is_set_formula(a)),
            lambda v, sem: not sem.is_set(v),
            "¬∃u(u = α)",
        ),
    )
}


def _singleton_graph(g: Var, z: Var):
    d = MatVar("δ")
    return And(
        ExistsSet(SetVar("u"), Equal(SetVar("u"), z)),
        ForallMat(d, Iff(Mem(d, z), Equal(d, g))),
    )


MAPS: dict[str, LibMap] = {
    m.name: m
    for m in (
        LibMap(
            "wrap-1x2",
            lambda g, z: Equal(z, MatrixTerm(Shape(1, 2), (g, g))),
            lambda v, sem: mk_matrix((1, 2), (v, v)),
            "ζ = [γ γ]",
        ),
        LibMap("singleton", _singleton_graph, lambda v, sem: mk_set((v,)), "ζ = {γ}"),
        LibMap("to-empty", lambda g, z: Equal(z, EMPTY_CONST), lambda v, sem: EMPTY, "ζ = ∅"),
        LibMap("identity", lambda g, z: Equal(z, g), lambda v, sem: v, "ζ = γ"),
    )
}


# ------------------------------------------------------------ helpers


def _grid(letter: str, shape: Shape) -> list[MatVar]:
    sep = "" if shape.rows < 10 and shape.cols < 10 else "_"
    return [MatVar(f"{letter}{i}{sep}{j}") for i, j in shape.cells()]


def _forall_all(vars_, body):
    for v in reversed(vars_):
        body = Forall(v, body)
    return body


def _exists_all(vars_, body):
    for v in reversed(vars_):
        body = Exists(v, body)
    return body


def _mat(shape: Shape, vars_) -> MatrixTerm:
    return MatrixTerm(shape, tuple(vars_))


x, y, z, u = SetVar("x"), SetVar("y"), SetVar("z"), SetVar("u")
alpha, beta, gamma, zeta = MatVar("α"), MatVar("β"), MatVar("γ"), MatVar("ζ")


# ------------------------------------------------------------ schema builders


def _set_matrix(s: Shape, **_):
    a = _grid("α", s)
    term = _mat(s, a)
    names = [v.name for v in a]

    def build(env, sem, s=s, names=names):
        return mk_matrix(s, [env[n] for n in names])

    f = _forall_all(a, ExistsMat(beta, Equal(beta, term)))
    return f, {"β": build}, {"β": term}


def _reduction(**_):
    return ForallSet(x, Equal(MatrixTerm(Shape(1, 1), (x,)), x)), {}, {}


def _omission(s: Shape, **_):
    a = _grid("α", s)
    m = _mat(s, a)
    return _forall_all(a, Equal(MatrixTerm(Shape(1, 1), (m,)), m)), {}, {}


def _division_sets(s: Shape, **_):
    a = _grid("α", s)
    return ForallSet(x, _forall_all(a, Not(Equal(x, _mat(s, a))))), {}, {}


def _division_matrices(s: Shape, t: Shape, **_):
    a, b = _grid("α", s), _grid("β", t)
    return _forall_all(a + b, Not(Equal(_mat(s, a), _mat(t, b)))), {}, {}


def _epsilon(s: Shape, **_):
    a = _grid("α", s)
    return _forall_all(a + [beta], Not(Mem(beta, _mat(s, a)))), {}, {}


def _matrix_ext(s: Shape, **_):
    a, b = _grid("α", s), _grid("β", s)
    entries = And(*(Equal(p, q) for p, q in zip(a, b)))
    return _forall_all(a + b, Iff(Equal(_mat(s, a), _mat(s, b)), entries)), {}, {}


def _set_ext(**_):
    body = Iff(Equal(x, y), ForallMat(alpha, Iff(Mem(alpha, x), Mem(alpha, y))))
    return ForallSet(x, ForallSet(y, body)), {}, {}


def _empty(**_):
    f = ExistsSet(x, And(Equal(x, EMPTY_CONST), ForallMat(alpha, Not(Mem(alpha, x)))))
    return f, {"x": lambda env, sem: setops.empty()}, {}


def _separation(phi: LibPredicate, **_):
    body = Iff(Mem(alpha, y), And(Mem(alpha, x), phi.formula(alpha)))
    f = ForallSet(x, ExistsSet(y, ForallMat(alpha, body)))

    def build(env, sem):
        return setops.separation(env["x"], setops.Predicate(phi.name, lambda v: phi.fn(v, sem)))

    return f, {"y": build}, {}


def _pairing(**_):
    body = Iff(Mem(gamma, x), Or(Equal(gamma, alpha), Equal(gamma, beta)))
    f = ForallMat(alpha, ForallMat(beta, ExistsSet(x, ForallMat(gamma, body))))
    return f, {"x": lambda env, sem: setops.pair_set(env["α"], env["β"])}, {}


def _union(**_):
    guard = ForallMat(alpha, Implies(Mem(alpha, x), ExistsSet(u, Equal(u, alpha))))
    body = Iff(Mem(beta, y), ExistsSet(z, And(Mem(z, x), Mem(beta, z))))
    f = ForallSet(x, Implies(guard, ExistsSet(y, ForallMat(beta, body))))
    return f, {"y": lambda env, sem: _union_in(env["x"], sem)}, {}


def _union_in(v: Value, sem) -> Value:
    # In the encoded model every member is a set, so the guard always holds
    # there; work on the encoding so the union is the one of that model.
    return setops.union(sem.lift(v))


def _powerset(**_):
    g = MatVar("γ")
    subset = ForallMat(g, Implies(Mem(g, u), Mem(g, x)))
    body = Iff(Mem(alpha, y), ExistsSet(u, And(Equal(u, alpha), subset)))
    f = ForallSet(x, ExistsSet(y, ForallMat(alpha, body)))
    return f, {"y": lambda env, sem: setops.powerset(sem.lift(env["x"]))}, {}


def _infinity(**_):
    succ = ExistsIn(z, x, ForallMat(gamma, Iff(Mem(gamma, z), Equal(gamma, y))))
    body = And(Mem(EMPTY_CONST, x), ForallSet(y, Implies(Mem(y, x), succ)))

    def build(env, sem):
        # One stage past the highest rank present: its last element lies
        # outside the universe, so the successor rule is tested on every
        # chain member the universe can name.
        return setops.infinity_stage(sem.max_rank + 2)

    return ExistsSet(x, body), {"x": build}, {}


def _replacement(phi: LibMap, **_):
    g, zt = MatVar("γ"), MatVar("ζ")
    body = Iff(Mem(zt, y), ExistsMat(g, And(Mem(g, x), phi.graph(g, zt))))
    f = ForallSet(x, ExistsSet(y, ForallMat(zt, body)))

    def build(env, sem):
        return setops.replacement(
            sem.lift(env["x"]), setops.TotalMap(phi.name, lambda v: phi.fn(v, sem))
        )

    return f, {"y": build}, {}


def _matrices_over(s: Shape, **_):
    b = _grid("β", s)
    inner = And(Equal(alpha, _mat(s, b)), *(Mem(v, x) for v in b))
    f = ForallSet(x, ExistsSet(y, ForallMat(alpha, Iff(Mem(alpha, y), _exists_all(b, inner)))))
    return f, {"y": lambda env, sem, s=s: setops.matrices_over(sem.lift(env["x"]), s)}, {}


# kind: "none" | "shape" | "shape2" (m·n >= 2) | "pair" | "phi" | "map"
_REGISTRY: dict[str, tuple[str, Callable, str]] = {
    "set-matrix": ("shape", _set_matrix, "∀ᾱ∃β β = M(ᾱ)"),
    "reduction": ("none", _reduction, "∀x [x] = x"),
    "omission": ("shape", _omission, "∀ᾱ [[M(ᾱ)]] = M(ᾱ)"),
    "division-sets": ("shape2", _division_sets, "∀x∀ᾱ x ≠ M(ᾱ), m·n ≥ 2"),
    "division-matrices": ("pair", _division_matrices, "∀ᾱ∀β̄ M(ᾱ) ≠ N(β̄), distinct non-1x1 shapes"),
    "epsilon": ("shape2", _epsilon, "∀ᾱ∀β β ∉ M(ᾱ), m·n ≥ 2"),
    "matrix-extensionality": ("shape", _matrix_ext, "M(ᾱ) = M(β̄) ⇔ ∧ αij = βij"),
    "set-extensionality": ("none", _set_ext, "x = y ⇔ ∀α(α ∈ x ⇔ α ∈ y)"),
    "empty": ("none", _empty, "∃x x = ∅ ∧ ∀α α ∉ x"),
    "separation": ("phi", _separation, "∀x∃y∀α α ∈ y ⇔ α ∈ x ∧ Φ(α)"),
    "pairing": ("none", _pairing, "∀α∀β∃x∀γ γ ∈ x ⇔ γ = α ∨ γ = β"),
    "union": ("none", _union, "guarded union"),
    "powerset": ("none", _powerset, "∀x∃y∀α α ∈ y ⇔ α is a set ⊆ x"),
    "infinity": ("none", _infinity, "finite stage of ∅ ∈ x ∧ ∀y(y ∈ x ⇒ {y} ∈ x)"),
    "replacement": ("map", _replacement, "∀x∃y∀ζ ζ ∈ y ⇔ ∃γ(γ ∈ x ∧ Φ(γ, ζ))"),
    "matrices-over": ("shape", _matrices_over, "∀x∃y∀α α ∈ y ⇔ α = M(β̄) with βij ∈ x"),
}

SCHEMA_NAMES: tuple[str, ...] = tuple(_REGISTRY)

_ALIASES = {
    "division-4a": "division-sets",
    "division-4b": "division-matrices",
    "ext-matrices": "matrix-extensionality",
    "ext-sets": "set-extensionality",
    "pair": "pairing",
    "set-of-set-matrices": "matrices-over",
}

THEORIES = {
    "smt": SCHEMA_NAMES,
    "smt-minus": tuple(n for n in SCHEMA_NAMES if n not in ("division-sets", "epsilon")),
}


def schema_kind(name: str) -> str:
    return _REGISTRY[canonical_name(name)][0]


def schema_summary(name: str) -> str:
    return _REGISTRY[canonical_name(name)][2]


def canonical_name(name: str) -> str:
    key = name.strip().lower()
    key = _ALIASES.get(key, key)
    if key not in _REGISTRY:
        raise SchemaError(f"unknown schema {name!r}; known: {', '.join(SCHEMA_NAMES)}")
    return key


def instantiate_schema(
    name: str, shapes: Sequence[ShapeLike] = (), phi: str | None = None
) -> Schema:
    """Closed formula (plus witness rules) for one schema instance."""
    name = canonical_name(name)
    kind, make, _ = _REGISTRY[name]
    shapes = tuple(Shape.coerce(s) for s in shapes)
    want = {"none": 0, "shape": 1, "shape2": 1, "pair": 2, "phi": 0, "map": 0}[kind]
    if len(shapes) != want:
        raise SchemaError(f"{name} takes {want} shape parameter(s), got {len(shapes)}")
    if kind == "shape2" and shapes[0].size < 2:
        raise SchemaError(f"{name} needs a shape with m·n ≥ 2, got {shapes[0]}")
    if kind == "pair":
        s, t = shapes
        if s.size < 2 or t.size < 2 or s == t:
            raise SchemaError(f"{name} needs two distinct shapes other than 1x1, got {s} and {t}")
    if kind in ("phi", "map"):
        lib = PREDICATES if kind == "phi" else MAPS
        if phi is None:
            raise SchemaError(f"{name} needs a library entry; choose from {', '.join(lib)}")
        if phi not in lib:
            raise SchemaError(f"unknown {'predicate' if kind == 'phi' else 'map'} {phi!r} for {name}")
        f, wit, terms = make(lib[phi])
    else:
        if phi is not None:
            raise SchemaError(f"{name} takes no predicate or map")
        if kind == "pair":
            f, wit, terms = make(*shapes)
        elif shapes:
            f, wit, terms = make(shapes[0])
        else:
            f, wit, terms = make()
    return Schema(name, shapes, phi, f, wit, terms)


def shapes_up_to(bound: ShapeLike) -> list[Shape]:
    b = Shape.coerce(bound)
    return [Shape(r, c) for r in range(1, b.rows + 1) for c in range(1, b.cols + 1)]


def instances_of(name: str, bound: ShapeLike, phis: Sequence[str] | None = None) -> list[Schema]:
    """Every admissible instance of one schema with shapes inside ``bound``."""
    name = canonical_name(name)
    kind = _REGISTRY[name][0]
    shapes = shapes_up_to(bound)
    if kind == "none":
        return [instantiate_schema(name)]
    if kind == "shape":
        return [instantiate_schema(name, [s]) for s in shapes]
    if kind == "shape2":
        return [instantiate_schema(name, [s]) for s in shapes if s.size >= 2]
    if kind == "pair":
        big = [s for s in shapes if s.size >= 2]
        return [instantiate_schema(name, [s, t]) for s in big for t in big if s != t]
    lib = PREDICATES if kind == "phi" else MAPS
    return [instantiate_schema(name, phi=p) for p in (phis or lib)]


def suite_instances(theory: str, bound: ShapeLike) -> list[Schema]:
    key = theory.strip().lower().replace("_", "-").replace("⁻", "-minus")
    if key not in THEORIES:
        raise SchemaError(f"unknown theory {theory!r}; expected smt or smt-minus")
    out: list[Schema] = []
    for name in THEORIES[key]:
        out.extend(instances_of(name, bound))
    return out
