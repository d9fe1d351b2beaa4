"""Models and the reference (Tarskian) evaluator.

Two models share one universe:

* ``native``: values are what they are.  ``∈`` and ``=`` are
  :func:`~setmatrix.core.mem` and :func:`~setmatrix.core.eq`.
* ``zfm-image``: every value is replaced by its set encoding.  The domain
  is the membership closure of the encoded universe, both sorts range over
  all of it, and ``∈``/``=`` compare encodings.

The evaluator here is deliberately naive; :mod:`setmatrix.logic.check`
runs the same semantics through a compiled kernel and the test suite
compares the two.
"""

from __future__ import annotations

from typing import Callable, Mapping

from ..core import EMPTY, SetNode, SMTError, Value, mem as core_mem, mk_matrix
from ..encode import encode_zfm
from .formula import (
    And,
    EmptyConst,
    Equal,
    ExistsIn,
    ForallIn,
    Iff,
    Implies,
    MatrixTerm,
    Mem,
    Not,
    Or,
    Quant,
    Var,
)
from .universe import Universe, set_rank

__all__ = [
    "MODELS",
    "EvaluationError",
    "Semantics",
    "semantics",
    "normalize_model",
    "evaluate",
    "first_counterexample",
    "residual",
]

MODELS = ("native", "zfm-image")

Builder = Callable[[Mapping[str, Value], "Semantics"], Value]


class EvaluationError(SMTError):
    pass


def normalize_model(model: str) -> str:
    m = model.lower()
    if m in ("native", "smt"):
        return "native"
    if m in ("zfm", "zfm-image", "zfm_image"):
        return "zfm-image"
    raise ValueError(f"unknown model {model!r}; expected native or zfm-image")


class Semantics:
    """Interpretation of ``∈``, ``=`` and quantifier ranges in one model."""

    def __init__(self, universe: Universe, model: str):
        self.universe = universe
        self.model = normalize_model(model)
        self.zfm = self.model == "zfm-image"
        if self.zfm:
            seen: set[Value] = set()
            stack = [encode_zfm(v) for v in universe.values]
            while stack:
                s = stack.pop()
                if s not in seen:
                    seen.add(s)
                    stack.extend(s.elements)
            dom = tuple(sorted(seen))
            self.domain_all = dom
            self.domain_set = dom
        else:
            self.domain_all = universe.values
            self.domain_set = universe.sets
        self._max_rank = max(set_rank(v) for v in self.domain_all)

    @property
    def max_rank(self) -> int:
        return self._max_rank

    def lift(self, v: Value) -> Value:
        return encode_zfm(v) if self.zfm else v

    def eq(self, a: Value, b: Value) -> bool:
        if a == b:
            return True
        return self.zfm and encode_zfm(a) == encode_zfm(b)

    def mem(self, a: Value, b: Value) -> bool:
        if self.zfm:
            return core_mem(encode_zfm(a), encode_zfm(b))
        return core_mem(a, b)

    def is_set(self, v: Value) -> bool:
        return self.zfm or isinstance(v, SetNode)

    def members(self, v: Value) -> tuple[Value, ...]:
        v = self.lift(v)
        return v.elements if isinstance(v, SetNode) else ()

    def domain(self, set_sort: bool) -> tuple[Value, ...]:
        return self.domain_set if set_sort else self.domain_all

    def bounded_range(self, var: Var, bound: Value) -> list[Value]:
        return [m for m in self.members(bound) if not var.is_set_sort or self.is_set(m)]


def semantics(u, model: str = "native") -> Semantics:
    """The :class:`Semantics` for ``u`` in ``model``, cached on the universe."""
    model = normalize_model(model)
    if isinstance(u, Semantics):
        if model != u.model:
            raise ValueError(f"semantics is for {u.model}, not {model}")
        return u
    cache = u.__dict__.setdefault("_semantics", {})
    if model not in cache:
        cache[model] = Semantics(u, model)
    return cache[model]


def eval_term(t, env: Mapping[str, Value]) -> Value:
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise EvaluationError(f"unbound variable {t}") from None
    if isinstance(t, EmptyConst):
        return EMPTY
    if isinstance(t, MatrixTerm):
        return mk_matrix(t.shape, [eval_term(s, env) for s in t.subterms])
    raise EvaluationError(f"not a term: {t!r}")


def _eval(f, sem: Semantics, env: dict, witnesses: Mapping[str, Builder]) -> bool:
    if isinstance(f, Mem):
        return sem.mem(eval_term(f.left, env), eval_term(f.right, env))
    if isinstance(f, Equal):
        return sem.eq(eval_term(f.left, env), eval_term(f.right, env))
    if isinstance(f, Not):
        return not _eval(f.body, sem, env, witnesses)
    if isinstance(f, And):
        return all(_eval(p, sem, env, witnesses) for p in f.parts)
    if isinstance(f, Or):
        return any(_eval(p, sem, env, witnesses) for p in f.parts)
    if isinstance(f, Implies):
        return not _eval(f.left, sem, env, witnesses) or _eval(f.right, sem, env, witnesses)
    if isinstance(f, Iff):
        return _eval(f.left, sem, env, witnesses) == _eval(f.right, sem, env, witnesses)
    if isinstance(f, Quant):
        name = f.var.name
        saved = env.get(name, _MISSING)
        try:
            if not f.forall and name in witnesses:
                env[name] = witnesses[name](env, sem)
                return _eval(f.body, sem, env, witnesses)
            want = f.forall
            for v in sem.domain(f.var.is_set_sort):
                env[name] = v
                if _eval(f.body, sem, env, witnesses) != want:
                    return not want
            return want
        finally:
            _restore(env, name, saved)
    if isinstance(f, (ForallIn, ExistsIn)):
        name = f.var.name
        rng = sem.bounded_range(f.var, eval_term(f.bound, env))
        saved = env.get(name, _MISSING)
        try:
            want = f.forall
            for v in rng:
                env[name] = v
                if _eval(f.body, sem, env, witnesses) != want:
                    return not want
            return want
        finally:
            _restore(env, name, saved)
    raise EvaluationError(f"not a formula: {f!r}")


_MISSING = object()


def _restore(env, name, saved):
    if saved is _MISSING:
        env.pop(name, None)
    else:
        env[name] = saved


def evaluate(
    f,
    u,
    model: str = "native",
    env: Mapping[str, Value] | None = None,
    witnesses: Mapping[str, Builder] | None = None,
) -> bool:
    """Truth of ``f`` in ``u`` under ``model``.

    ``env`` assigns the free variables.  ``witnesses`` maps the name of an
    existentially bound variable to a builder; that quantifier is then
    discharged by the built value instead of a search over the universe.
    """
    sem = semantics(u, model)
    return _eval(f, sem, dict(env or {}), witnesses or {})


def _is_constructed(f, witnesses) -> bool:
    return isinstance(f, Quant) and not f.forall and f.var.name in witnesses


def first_counterexample(
    f,
    u,
    model: str = "native",
    env: Mapping[str, Value] | None = None,
    witnesses: Mapping[str, Builder] | None = None,
) -> dict[str, Value] | None:
    """First failing assignment to the universal prefix, in value order.

    The prefix is the maximal run of universal quantifiers (plus any
    constructed existentials and their guards).  Returns ``None`` when the
    formula holds.
    """
    sem = semantics(u, model)
    witnesses = witnesses or {}
    env = dict(env or {})

    def walk(g):
        if isinstance(g, Quant) and g.forall:
            for v in sem.domain(g.var.is_set_sort):
                env[g.var.name] = v
                hit = walk(g.body)
                if hit is not None:
                    return hit
            del env[g.var.name]
            return None
        if isinstance(g, ForallIn):
            rng = sem.bounded_range(g.var, eval_term(g.bound, env))
            for v in rng:
                env[g.var.name] = v
                hit = walk(g.body)
                if hit is not None:
                    return hit
            env.pop(g.var.name, None)
            return None
        if _is_constructed(g, witnesses):
            env[g.var.name] = witnesses[g.var.name](env, sem)
            hit = walk(g.body)
            del env[g.var.name]
            return hit
        if isinstance(g, Implies) and _is_constructed(g.right, witnesses):
            if not _eval(g.left, sem, env, witnesses):
                return None
            return walk(g.right)
        return None if _eval(g, sem, env, witnesses) else dict(env)

    return walk(f)


def residual(f, witnesses: Mapping[str, Builder] | None = None):
    """The body left after stripping the prefix walked by :func:`first_counterexample`."""
    witnesses = witnesses or {}
    while True:
        if isinstance(f, Quant) and (f.forall or f.var.name in witnesses):
            f = f.body
        elif isinstance(f, ForallIn):
            f = f.body
        elif isinstance(f, Implies) and _is_constructed(f.right, witnesses):
            f = f.right
        else:
            return f
