"""Schema checking: verdicts, suites and counterexample replay.

Two engines decide the same question.  ``reference`` walks the formula
with :mod:`setmatrix.logic.semantics`.  ``kernel`` (the default) interns
the model's domain into an id table, compiles the formula with
:mod:`setmatrix.logic.plan` and runs it on the kernel from
:mod:`setmatrix.kernel`.  Both report the first failing assignment of the
universal prefix in value order, so their verdicts are interchangeable.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from ..core import SetNode, Shape, ShapeLike, Value
from ..encode import kpair, vn_ordinal
from ..kernel import kernel_class
from ..textio import to_text
from .formula import And, Forall, Iff, Implies, Quant, validate
from .plan import CompileError, Compiler, emit
from .schemas import Schema, instantiate_schema, suite_instances
from .semantics import (
    Semantics,
    evaluate,
    first_counterexample,
    normalize_model,
    residual,
    semantics,
)
from .universe import Universe

__all__ = ["Verdict", "check_schema", "check_suite", "replay", "ValueTable", "ENGINES"]

log = logging.getLogger(__name__)

ENGINES = ("kernel", "reference")


@dataclass(frozen=True)
class Verdict:
    schema: str
    params: tuple[Shape, ...]
    phi: str | None
    model: str
    holds: bool
    witness: dict[str, Value] | None
    bound: dict = field(default_factory=dict)
    engine: str = "kernel"

    @property
    def label(self) -> str:
        out = self.schema
        if self.params:
            out += "(" + ",".join(str(s) for s in self.params) + ")"
        if self.phi:
            out += f"[{self.phi}]"
        return out

    def to_dict(self) -> dict:
        return {
            "schema": self.schema,
            "params": [str(s) for s in self.params],
            "phi": self.phi,
            "model": self.model,
            "holds": self.holds,
            "witness": None
            if self.witness is None
            else {k: to_text(v) for k, v in self.witness.items()},
            "bound": dict(self.bound),
        }

    def __str__(self):
        head = f"{self.label} [{self.model}]: {'holds' if self.holds else 'FAILS'}"
        if self.witness:
            head += "  witness " + ", ".join(f"{k}={to_text(v)}" for k, v in self.witness.items())
        return head


# --------------------------------------------------------------- id table


class ValueTable:
    """Model values interned into a kernel.

    The domain occupies ids ``0..N-1`` in value order, so iterating ids is
    iterating values in order.  Witnesses built during a check are appended
    after the domain and are never part of a quantifier range.
    """

    def __init__(self, sem: Semantics, backend: str | None = None):
        self.sem = sem
        self.kernel = kernel_class(backend)(sem.zfm)
        self.ids: dict[Value, int] = {}
        self.values: list[Value] = []
        dom = sem.domain_all
        for i, v in enumerate(dom):
            self.ids[v] = i
            self.values.append(v)
        for i, v in enumerate(dom):
            got = self.kernel.add(*self._entry(v))
            if got != i:  # pragma: no cover - would mean the domain is not closed
                raise RuntimeError(f"domain not closed under members at {to_text(v)}")
        self.n_domain = len(dom)
        self.dom_all = list(range(len(dom)))
        self.dom_set = [self.ids[v] for v in sem.domain_set]
        self.kernel.set_domains(self.dom_all, self.dom_set)
        self.cells: dict[tuple[int, int], int] = {}
        self.empty_id = self.ids[SetNode(())] if SetNode(()) in self.ids else self.intern(SetNode(()))

    def _entry(self, v: Value):
        ids = self.ids
        if isinstance(v, SetNode):
            kids = [ids[e] for e in v.elements]
            return [0, len(kids), 0, *sorted(kids)], kids, True
        kids = [ids[e] for e in v.entries]
        return [1, v.shape.rows, v.shape.cols, *kids], [], False

    def intern(self, v: Value) -> int:
        got = self.ids.get(v)
        if got is not None:
            return got
        stack = [(v, False)]
        while stack:
            w, ready = stack.pop()
            if w in self.ids:
                continue
            kids = w.elements if isinstance(w, SetNode) else w.entries
            if not ready:
                stack.append((w, True))
                stack.extend((k, False) for k in kids if k not in self.ids)
                continue
            i = self.kernel.add(*self._entry(w))
            if i != len(self.values):  # pragma: no cover
                raise RuntimeError("kernel and table disagree on ids")
            self.ids[w] = i
            self.values.append(w)
        return self.ids[v]

    def cell_id(self, cell: tuple[int, int]) -> int:
        cid = self.cells.get(cell)
        if cid is None:
            cid = len(self.cells)
            self.cells[cell] = cid
            if self.sem.zfm:
                index = kpair(vn_ordinal(cell[0]), vn_ordinal(cell[1]))
                for e in range(self.n_domain):
                    self.kernel.set_kp(cid, e, self.intern(kpair(index, self.values[e])))
        return cid


def _table(sem: Semantics, backend: str | None) -> ValueTable:
    cache = sem.__dict__.setdefault("_tables", {})
    key = backend or "default"
    if key not in cache:
        cache[key] = ValueTable(sem, backend)
    return cache[key]


# --------------------------------------------------------------- prefix


class _Unsupported(Exception):
    pass


def _split_body(f) -> list:
    if isinstance(f, And):
        return list(f.parts)
    if isinstance(f, Iff):
        return [Implies(f.left, f.right), Implies(f.right, f.left)]
    return [f]


def _forall_chain(f):
    out = []
    while isinstance(f, Quant) and f.forall:
        out.append(f.var)
        f = f.body
    return out, f


def _wrap_forall(vars_, body):
    for v in reversed(vars_):
        body = Forall(v, body)
    return body


def _kernel_check(schema: Schema, sem: Semantics, backend: str | None):
    """First counterexample via the kernel, or ``None`` if the schema holds."""
    table = _table(sem, backend)
    kernel = table.kernel
    builders = {k: v for k, v in schema.witnesses.items() if k not in schema.witness_terms}

    p1, rest = _forall_chain(schema.formula)
    guard = None
    wvar = None
    if isinstance(rest, Implies) and isinstance(rest.right, Quant) and not rest.right.forall \
            and rest.right.var.name in builders:
        guard, rest = rest.left, rest.right
    if isinstance(rest, Quant) and not rest.forall and rest.var.name in builders:
        wvar, rest = rest.var, rest.body

    def compile_program(pre_bound, formula, top):
        comp = Compiler(table.empty_id, table.cell_id, schema.witness_terms)
        for name in pre_bound:
            comp.bind_name(name)
        ir = comp.formula(formula, top=top)
        code, root, nbufs = emit(ir)
        return code, root, comp.nslots, nbufs, comp

    def run(prog, init):
        code, root, nslots, nbufs, _ = prog
        status, slots = kernel.run(code, root, nslots, nbufs, init)
        if status < 0:
            raise _Unsupported()
        return status, slots

    if wvar is None:
        if guard is not None:  # pragma: no cover - guards only precede builders
            raise _Unsupported()
        let_var = None
        body = rest
        if isinstance(rest, Quant) and not rest.forall and rest.var.name in schema.witness_terms:
            let_var, body = rest.var, rest.body
            if isinstance(body, Quant) and body.forall:
                raise _Unsupported()
        parts = _split_body(body)
        best = None
        for part in parts:
            formula = part
            if let_var is not None:
                formula = type(rest)(let_var, part)
            formula = _wrap_forall(p1, formula)
            prog = compile_program((), formula, top=bool(p1))
            status, slots = run(prog, [])
            if status == 0:
                comp = prog[4]
                cand = tuple(table.values[slots[comp.top_slots[v.name]]] for v in p1)
                if best is None or cand < best:
                    best = cand
        if best is None:
            return None
        env = {v.name: val for v, val in zip(p1, best)}
        if let_var is not None:
            env[let_var.name] = schema.witnesses[let_var.name](env, sem)
        return env

    p2, body = _forall_chain(rest)
    pre = [v.name for v in p1] + [wvar.name]
    guard_prog = compile_program([v.name for v in p1], guard, top=False) if guard is not None else None
    progs = [
        compile_program(pre, _wrap_forall(p2, part) if p2 else part, top=bool(p2))
        for part in _split_body(body)
    ]
    domains = [[table.ids[v] for v in sem.domain(var.is_set_sort)] for var in p1]
    build = builders[wvar.name]
    for combo in product(*domains):
        init = list(combo)
        if guard_prog is not None:
            status, _ = run(guard_prog, init)
            if status == 0:
                continue
        env = {v.name: table.values[i] for v, i in zip(p1, combo)}
        w = build(env, sem)
        init.append(table.intern(sem.lift(w)))
        best = None
        for prog in progs:
            status, slots = run(prog, init)
            if status == 0:
                comp = prog[4]
                cand = tuple(table.values[slots[comp.top_slots[v.name]]] for v in p2)
                if best is None or cand < best:
                    best = cand
        if best is not None:
            env[wvar.name] = w
            env.update({v.name: val for v, val in zip(p2, best)})
            return env
    return None


# --------------------------------------------------------------- public API


def _bound_info(u: Universe, sem: Semantics) -> dict:
    return {
        "rank": u.rank,
        "depth": u.depth,
        "shapes": [str(s) for s in u.shapes],
        "universe": len(u.values),
        "domain": len(sem.domain_all),
    }


def check_schema(
    name,
    params: Sequence[ShapeLike] = (),
    u: Universe | None = None,
    model: str = "native",
    phi: str | None = None,
    *,
    engine: str = "kernel",
    backend: str | None = None,
) -> Verdict:
    """Check one schema instance in ``u`` under ``model``.

    ``name`` may also be a ready :class:`Schema`.  Constructive existentials
    are discharged by building the witness; every other quantifier ranges
    over the model's domain.
    """
    if u is None:
        raise TypeError("check_schema needs a universe")
    if isinstance(name, Schema):
        schema = name
        validate(schema.formula)
    else:
        schema = instantiate_schema(name, params, phi)
    model = normalize_model(model)
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}; expected one of {', '.join(ENGINES)}")
    sem = semantics(u, model)
    used = engine
    witness = None
    if engine == "kernel":
        try:
            witness = _kernel_check(schema, sem, backend)
        except (_Unsupported, CompileError) as exc:
            log.info("kernel cannot run %s (%s); using the reference evaluator", schema.label, exc)
            used = "reference"
    if used == "reference":
        witness = first_counterexample(schema.formula, sem, model, witnesses=schema.witnesses)
    return Verdict(
        schema=schema.name,
        params=schema.params,
        phi=schema.phi,
        model=model,
        holds=witness is None,
        witness=witness,
        bound=_bound_info(u, sem),
        engine=used,
    )


def check_suite(
    theory: str,
    u: Universe,
    model: str = "native",
    shape_bound: ShapeLike = "2x2",
    *,
    engine: str = "kernel",
    backend: str | None = None,
) -> list[Verdict]:
    """Check every instance of ``theory`` (``smt`` or ``smt-minus``) in order."""
    return [
        check_schema(s, u=u, model=model, engine=engine, backend=backend)
        for s in suite_instances(theory, shape_bound)
    ]


def replay(verdict: Verdict, u: Universe) -> bool:
    """Truth value of the schema body under the verdict's witness.

    For a failing verdict this is ``False``; that is the contract the tests
    hold the checker to.
    """
    if verdict.witness is None:
        raise ValueError("only failing verdicts carry a witness")
    schema = instantiate_schema(verdict.schema, verdict.params, verdict.phi)
    body = residual(schema.formula, schema.witnesses)
    return evaluate(body, u, verdict.model, env=verdict.witness, witnesses=schema.witnesses)
