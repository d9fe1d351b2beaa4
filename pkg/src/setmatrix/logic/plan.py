"""Compile formulas into kernel programs.

The compiler works on blocks of same-polarity quantifiers.  A block's body
is split into *premises* (the antecedent of ``⇒`` under ``∀``, the
conjuncts under ``∃``) and a residual.  Each block variable then gets the
cheapest binder a premise allows:

``bind``   the premise is ``v = t`` with ``t`` not mentioning ``v`` or later
           block variables, so ``v`` has at most one candidate;
``solve``  the premise is ``M(v, ...) = t`` for a matrix term over a run of
           block variables, so the entries are read off ``t``;
``qmem``   the premise is ``v ∈ t``, so ``v`` ranges over the members of ``t``;
``qdom``   otherwise ``v`` ranges over the whole domain of its sort.

Unused premises are pushed down to the first point where all their
variables are bound.  Every rewrite preserves both truth and the order in
which assignments are visited, so the first failure found is still the
first in value order.
"""

from __future__ import annotations

from ..core import Shape
from ..opcodes import Op
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
    strip_unit,
    term_vars,
)

__all__ = ["Op", "Compiler", "emit", "CompileError"]


class CompileError(Exception):
    pass


def _names(t) -> set[str]:
    return {v.name for v in term_vars(t)}


def _flatten_and(f) -> list:
    if isinstance(f, And):
        out = []
        for p in f.parts:
            out.extend(_flatten_and(p))
        return out
    return [f]


def _formula_vars(f) -> set[str]:
    from .formula import free_vars

    return {v.name for v in free_vars(f)}


class Compiler:
    """Turns formulas into nested IR tuples.

    ``slots`` maps variable names to kernel slots.  ``cell_id`` maps a
    1-based ``(i, j)`` cell to the kernel's cell number and ``empty_id`` is
    the id of ``∅``; both come from the value table.
    """

    def __init__(self, empty_id: int, cell_id, let_terms=None):
        self.empty_id = empty_id
        self.cell_id = cell_id
        self.let_terms = dict(let_terms or {})
        self.slots: dict[str, int] = {}
        self.nslots = 0
        self.cells_used: set[tuple[int, int]] = set()
        # name -> slot for the variables of the outermost block compiled with
        # top=True; the checker reads counterexamples from these slots.
        self.top_slots: dict[str, int] = {}

    # ---------------------------------------------------------------- slots

    def bind_name(self, name: str) -> int:
        slot = self.nslots
        self.nslots += 1
        self.slots[name] = slot
        return slot

    def _scoped(self, names):
        return {n: self.slots.get(n) for n in names}

    def _restore(self, saved):
        for n, s in saved.items():
            if s is None:
                self.slots.pop(n, None)
            else:
                self.slots[n] = s

    # ---------------------------------------------------------------- terms

    def term(self, t):
        t = strip_unit(t)
        if isinstance(t, Var):
            if t.name not in self.slots:
                raise CompileError(f"unbound variable {t}")
            return ("slot", self.slots[t.name])
        if isinstance(t, EmptyConst):
            return ("const", self.empty_id)
        if isinstance(t, MatrixTerm):
            cells = t.shape.cells()
            self.cells_used.update(cells)
            return (
                "mk",
                t.shape.rows,
                t.shape.cols,
                tuple(self.term(s) for s in t.subterms),
                tuple(self.cell_id(c) for c in cells),
            )
        raise CompileError(f"not a term: {t!r}")

    # ------------------------------------------------------------- formulas

    def formula(self, f, top: bool = False):
        if isinstance(f, Equal):
            return ("eq", self.term(f.left), self.term(f.right))
        if isinstance(f, Mem):
            return ("mem", self.term(f.left), self.term(f.right))
        if isinstance(f, Not):
            return ("not", self.formula(f.body))
        if isinstance(f, And):
            if not f.parts:
                return ("true",)
            return ("and", tuple(self.formula(p) for p in f.parts))
        if isinstance(f, Or):
            if not f.parts:
                return ("false",)
            return ("or", tuple(self.formula(p) for p in f.parts))
        if isinstance(f, Implies):
            return ("imp", self.formula(f.left), self.formula(f.right))
        if isinstance(f, Iff):
            return ("iff", self.formula(f.left), self.formula(f.right))
        if isinstance(f, (ForallIn, ExistsIn)):
            bound = self.term(f.bound)
            saved = self._scoped([f.var.name])
            slot = self.bind_name(f.var.name)
            filt = Op.M_SETS if f.var.is_set_sort else Op.M_ALL
            body = self.formula(f.body)
            self._restore(saved)
            return ("qmem", f.forall, slot, bound, filt, body)
        if isinstance(f, Quant):
            if not f.forall and f.var.name in self.let_terms:
                term = self.term(self.let_terms[f.var.name])
                saved = self._scoped([f.var.name])
                slot = self.bind_name(f.var.name)
                body = self.formula(f.body)
                self._restore(saved)
                return ("bind", False, slot, term, Op.LET, body)
            return self.block(f, top)
        if f is True:
            return ("true",)
        if f is False:
            return ("false",)
        raise CompileError(f"not a formula: {f!r}")

    # --------------------------------------------------------------- blocks

    def block(self, f: Quant, top: bool):
        forall = f.forall
        block_vars: list[Var] = []
        body = f
        while (
            isinstance(body, Quant)
            and body.forall == forall
            and body.var.name not in self.let_terms
            and body.var.name not in {v.name for v in block_vars}
        ):
            block_vars.append(body.var)
            body = body.body

        if not top and forall:
            # ∀v̄(A ⇔ B) = ∀v̄(A ⇒ B) ∧ ∀v̄(B ⇒ A), and ∀ distributes over ∧.
            if isinstance(body, Iff):
                return (
                    "and",
                    (
                        self._block(block_vars, True, Implies(body.left, body.right)),
                        self._block(block_vars, True, Implies(body.right, body.left)),
                    ),
                )
            if isinstance(body, And) and len(body.parts) > 1:
                return ("and", tuple(self._block(block_vars, True, p) for p in body.parts))
        if not top and not forall and isinstance(body, Or) and len(body.parts) > 1:
            return ("or", tuple(self._block(block_vars, False, p) for p in body.parts))
        return self._block(block_vars, forall, body, top)

    def _block(self, block_vars: list[Var], forall: bool, body, top: bool = False):
        if forall:
            if isinstance(body, Implies):
                premises, resid = _flatten_and(body.left), body.right
            elif isinstance(body, Not) and isinstance(body.body, (Equal, Mem)):
                premises, resid = [body.body], False
            else:
                premises, resid = [], body
        else:
            premises, resid = _flatten_and(body), True

        names = [v.name for v in block_vars]
        saved = self._scoped(names)
        pos_of = {n: i for i, n in enumerate(names)}
        used = [False] * len(premises)
        binders = []  # (kind, first_index, count, info, premise_index)
        k = 0
        while k < len(block_vars):
            later = set(names[k:])
            choice = self._pick(block_vars, k, later, premises, used)
            if choice is None:
                binders.append(("qdom", k, 1, None, None))
                k += 1
            else:
                kind, count, info, pi = choice
                used[pi] = True
                binders.append((kind, k, count, info, pi))
                k += count

        # Where each remaining premise becomes evaluable: after the binder
        # covering its last block variable (-1 means before the first).
        placed: dict[int, list] = {}
        for i, p in enumerate(premises):
            if used[i]:
                continue
            idx = max((pos_of[n] for n in _formula_vars(p) if n in pos_of), default=-1)
            at = -1
            for b_i, (_, first, count, _, _) in enumerate(binders):
                if first <= idx < first + count:
                    at = b_i
            placed.setdefault(at, []).append(p)

        # Allocate slots outside in, so inner terms see outer variables.
        binder_slots = []
        for kind, first, count, info, _ in binders:
            binder_slots.append([self.bind_name(n) for n in names[first:first + count]])
        if top:
            self.top_slots = {n: self.slots[n] for n in names}

        # Compile terms used by binders with only the variables bound so far
        # visible, mirroring the evaluation order.
        compiled_binders = []
        for b_i, (kind, first, count, info, _) in enumerate(binders):
            visible = set(names[:first])
            hidden = {n: self.slots.pop(n) for n in names if n not in visible and n in self.slots}
            if kind == "bind":
                dom = Op.DOM_SET if block_vars[first].is_set_sort else Op.DOM_ALL
                compiled_binders.append(("bind", binder_slots[b_i][0], self.term(info), dom))
            elif kind == "solve":
                shape, order, target = info
                entries = []
                for p, name in enumerate(order):
                    v = block_vars[pos_of[name]]
                    dom = Op.DOM_SET if v.is_set_sort else Op.DOM_ALL
                    entries.append((binder_slots[b_i][pos_of[name] - first], p, dom))
                cells = tuple(self.cell_id(c) for c in shape.cells())
                self.cells_used.update(shape.cells())
                compiled_binders.append(
                    ("solve", shape.rows, shape.cols, self.term(target), tuple(entries), cells)
                )
            elif kind == "qmem":
                filt = Op.M_IN_SET if block_vars[first].is_set_sort else Op.M_IN_ALL
                compiled_binders.append(("qmem", binder_slots[b_i][0], self.term(info), filt))
            else:
                dom = Op.DOM_SET if block_vars[first].is_set_sort else Op.DOM_ALL
                compiled_binders.append(("qdom", binder_slots[b_i][0], dom))
            self.slots.update(hidden)

        inner = self.formula(resid)
        for b_i in range(len(binders) - 1, -2, -1):
            ps = placed.get(b_i)
            if ps:
                cond = [self.formula(p) for p in ps]
                if forall:
                    pre = cond[0] if len(cond) == 1 else ("and", tuple(cond))
                    inner = ("imp", pre, inner)
                else:
                    inner = ("and", tuple(cond) + (inner,))
            if b_i < 0:
                break
            b = compiled_binders[b_i]
            if b[0] == "bind":
                inner = ("bind", forall, b[1], b[2], b[3], inner)
            elif b[0] == "solve":
                inner = ("solve", forall, b[1], b[2], b[3], b[4], b[5], inner)
            elif b[0] == "qmem":
                inner = ("qmem", forall, b[1], b[2], b[3], inner)
            else:
                inner = ("qdom", forall, b[1], b[2], inner)
        self._restore(saved)
        return inner

    def _pick(self, block_vars, k, later, premises, used):
        v = block_vars[k]
        best = None
        for i, p in enumerate(premises):
            if used[i]:
                continue
            if isinstance(p, Equal):
                for lhs, rhs in ((p.left, p.right), (p.right, p.left)):
                    lhs, rhs = strip_unit(lhs), strip_unit(rhs)
                    if _names(rhs) & later:
                        continue
                    if isinstance(lhs, Var) and lhs.name == v.name:
                        return ("bind", 1, rhs, i)
                    if isinstance(lhs, MatrixTerm) and best is None:
                        order = _solve_order(lhs, block_vars, k)
                        if order is not None:
                            best = ("solve", len(order), (lhs.shape, order, rhs), i)
        if best is not None:
            return best
        for i, p in enumerate(premises):
            if used[i] or not isinstance(p, Mem):
                continue
            lhs = strip_unit(p.left)
            if isinstance(lhs, Var) and lhs.name == v.name and not (_names(p.right) & later):
                return ("qmem", 1, p.right, i)
        return None


def _solve_order(m: MatrixTerm, block_vars, k) -> tuple[str, ...] | None:
    """Names of ``m``'s entry variables if they are exactly block vars ``k..k+n-1``."""
    subs = [strip_unit(s) for s in m.subterms]
    if not all(isinstance(s, Var) for s in subs):
        return None
    names = [s.name for s in subs]
    n = len(names)
    if len(set(names)) != n or k + n > len(block_vars):
        return None
    run = {v.name for v in block_vars[k:k + n]}
    if set(names) != run:
        return None
    return tuple(names)


# --------------------------------------------------------------------- emit


def emit(ir) -> tuple[list[int], int, int]:
    """Flatten IR into ``(code, root_pc, n_mk_buffers)``; children precede parents."""
    code: list[int] = []
    nbuf = [0]

    def node(*fields):
        pc = len(code)
        code.extend(fields)
        return pc

    def t(x):
        kind = x[0]
        if kind == "slot":
            return node(Op.T_SLOT, x[1])
        if kind == "const":
            return node(Op.T_CONST, x[1])
        _, rows, cols, args, cells = x
        arg_pcs = [t(a) for a in args]
        buf = nbuf[0]
        nbuf[0] += 1
        return node(Op.T_MK, rows, cols, buf, *arg_pcs, *cells)

    def f(x):
        kind = x[0]
        if kind == "true":
            return node(Op.F_TRUE)
        if kind == "false":
            return node(Op.F_FALSE)
        if kind in ("eq", "mem"):
            a, b = t(x[1]), t(x[2])
            return node(Op.F_EQ if kind == "eq" else Op.F_MEM, a, b)
        if kind == "not":
            return node(Op.F_NOT, f(x[1]))
        if kind in ("and", "or"):
            kids = [f(c) for c in x[1]]
            return node(Op.F_AND if kind == "and" else Op.F_OR, len(kids), *kids)
        if kind in ("imp", "iff"):
            a, b = f(x[1]), f(x[2])
            return node(Op.F_IMP if kind == "imp" else Op.F_IFF, a, b)
        if kind == "qdom":
            _, forall, slot, dom, body = x
            return node(Op.F_QDOM, int(forall), slot, dom, f(body))
        if kind == "qmem":
            _, forall, slot, term, filt, body = x
            tp = t(term)
            return node(Op.F_QMEM, int(forall), slot, tp, filt, f(body))
        if kind == "bind":
            _, forall, slot, term, dom, body = x
            tp = t(term)
            return node(Op.F_BIND, int(forall), slot, tp, dom, f(body))
        if kind == "solve":
            _, forall, rows, cols, target, entries, cells, body = x
            tp = t(target)
            bp = f(body)
            flat = [v for e in entries for v in e]
            return node(Op.F_SOLVE, int(forall), rows, cols, tp, bp, len(entries), *flat, *cells)
        raise CompileError(f"unknown IR node {kind!r}")

    root = f(ir)
    return code, root, nbuf[0]
