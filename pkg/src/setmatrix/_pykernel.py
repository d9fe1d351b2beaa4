"""Pure-Python kernel: the fallback when the compiled extension is missing.

It runs exactly the algorithm of ``_kernel.pyx`` over the same flat
program encoding (see :mod:`setmatrix.logic.plan`).  Values live in an
id-space table; a key is ``(0, n, 0, *sorted member ids)`` for a set and
``(1, rows, cols, *entry ids)`` for a matrix.  A matrix term whose value is
not in the table evaluates to a *scratch* handle ``-(buf + 1)``, where the
key sits in that term's buffer.
"""

from __future__ import annotations

from bisect import bisect_left

from .opcodes import Op

__all__ = ["Kernel", "UNSUPPORTED", "COMPILED"]

COMPILED = False
UNSUPPORTED = -(1 << 30)

_T_SLOT, _T_CONST, _T_MK = Op.T_SLOT, Op.T_CONST, Op.T_MK


class Kernel:
    def __init__(self, zfm: bool):
        self.zfm = bool(zfm)
        self.keys: list[tuple] = []
        self.index: dict[tuple, int] = {}
        self.canon: list[tuple] = []
        self.is_set: list[bool] = []
        self.in_all: list[bool] = []
        self.in_set: list[bool] = []
        self.dom_all: list[int] = []
        self.dom_set: list[int] = []
        self.kp: dict[int, list[int]] = {}
        self.rev: dict[int, tuple[int, int]] = {}

    # ------------------------------------------------------------- table

    def add(self, key, canon, is_set) -> int:
        key = tuple(key)
        got = self.index.get(key)
        if got is not None:
            return got
        i = len(self.keys)
        self.keys.append(key)
        self.index[key] = i
        self.canon.append(tuple(canon))
        self.is_set.append(bool(is_set))
        self.in_all.append(False)
        self.in_set.append(False)
        return i

    def lookup(self, key) -> int:
        return self.index.get(tuple(key), -1)

    def size(self) -> int:
        return len(self.keys)

    def info(self, h: int) -> tuple:
        """``(key, members, is_set, in_all, in_set)`` for id ``h``; for tests."""
        return list(self.keys[h]), list(self.canon[h]), self.is_set[h], self.in_all[h], self.in_set[h]

    def set_domains(self, all_ids, set_ids):
        self.dom_all = list(all_ids)
        self.dom_set = list(set_ids)
        for i in range(len(self.in_all)):
            self.in_all[i] = self.in_set[i] = False
        for i in self.dom_all:
            self.in_all[i] = True
        for i in self.dom_set:
            self.in_set[i] = True

    def set_kp(self, cell: int, e: int, kp: int):
        row = self.kp.setdefault(cell, [])
        if len(row) <= e:
            row.extend([-1] * (e + 1 - len(row)))
        row[e] = kp
        self.rev[kp] = (cell, e)

    # ------------------------------------------------------------- run

    def run(self, code, root, nslots, nbufs, init_slots=()):
        self.code = list(code)
        self.slots = [0] * nslots
        for i, v in enumerate(init_slots):
            self.slots[i] = v
        self.bufs = [()] * nbufs
        r = self._f(root)
        return (-1 if r < 0 else r), list(self.slots)

    def _key(self, h):
        return self.keys[h] if h >= 0 else self.bufs[-h - 1]

    def _t(self, pc):
        code = self.code
        op = code[pc]
        if op == _T_SLOT:
            return self.slots[code[pc + 1]]
        if op == _T_CONST:
            return code[pc + 1]
        rows, cols, buf = code[pc + 1], code[pc + 2], code[pc + 3]
        n = rows * cols
        args = []
        for k in range(n):
            a = self._t(code[pc + 4 + k])
            if a < 0:
                return UNSUPPORTED
            args.append(a)
        if self.zfm:
            kids = []
            for k in range(n):
                row = self.kp.get(code[pc + 4 + n + k])
                a = args[k]
                if row is None or a >= len(row) or row[a] < 0:
                    return UNSUPPORTED
                kids.append(row[a])
            kids.sort()
            key = (0, n, 0, *kids)
        else:
            key = (1, rows, cols, *args)
        got = self.index.get(key)
        if got is not None:
            return got
        self.bufs[buf] = key
        return -(buf + 1)

    def _in_dom(self, h, dom):
        if h < 0:
            return False
        return self.in_set[h] if dom == Op.DOM_SET else self.in_all[h]

    def _members(self, h, filt):
        # Members of h in value order, after the filter.  None = unsupported.
        if h >= 0:
            if not self.zfm and not self.is_set[h]:
                return ()
            out = self.canon[h]
        else:
            if not self.zfm:
                return ()
            if filt in (Op.M_ALL, Op.M_SETS):
                return None
            out = self.bufs[-h - 1][3:]
        if filt == Op.M_SETS:
            return [m for m in out if self.is_set[m]]
        if filt == Op.M_IN_ALL:
            return [m for m in out if self.in_all[m]]
        if filt == Op.M_IN_SET:
            return [m for m in out if self.in_set[m]]
        return out

    def _f(self, pc):
        code = self.code
        op = code[pc]
        if op == Op.F_EQ or op == Op.F_MEM:
            a = self._t(code[pc + 1])
            b = self._t(code[pc + 2])
            if a == UNSUPPORTED or b == UNSUPPORTED:
                return -1
            if op == Op.F_EQ:
                if a >= 0 and b >= 0:
                    return int(a == b)
                if a < 0 and b < 0:
                    return int(self.bufs[-a - 1] == self.bufs[-b - 1])
                return 0
            if a < 0:
                return 0
            if b >= 0:
                if not self.zfm and not self.is_set[b]:
                    return 0
                kids = self.keys[b]
            else:
                if not self.zfm:
                    return 0
                kids = self.bufs[-b - 1]
            i = bisect_left(kids, a, 3)
            return int(i < len(kids) and kids[i] == a)
        if op == Op.F_TRUE:
            return 1
        if op == Op.F_FALSE:
            return 0
        if op == Op.F_NOT:
            r = self._f(code[pc + 1])
            return r if r < 0 else 1 - r
        if op == Op.F_AND or op == Op.F_OR:
            stop = 0 if op == Op.F_AND else 1
            for k in range(code[pc + 1]):
                r = self._f(code[pc + 2 + k])
                if r < 0 or r == stop:
                    return r
            return 1 - stop
        if op == Op.F_IMP:
            r = self._f(code[pc + 1])
            if r != 1:
                return r if r < 0 else 1
            return self._f(code[pc + 2])
        if op == Op.F_IFF:
            r = self._f(code[pc + 1])
            if r < 0:
                return r
            s = self._f(code[pc + 2])
            if s < 0:
                return s
            return int(r == s)
        if op == Op.F_QDOM:
            forall, slot, dom, body = code[pc + 1], code[pc + 2], code[pc + 3], code[pc + 4]
            ids = self.dom_set if dom == Op.DOM_SET else self.dom_all
            return self._loop(forall, slot, ids, body)
        if op == Op.F_QMEM:
            forall, slot, tp, filt, body = code[pc + 1:pc + 6]
            h = self._t(tp)
            if h == UNSUPPORTED:
                return -1
            ids = self._members(h, filt)
            if ids is None:
                return -1
            return self._loop(forall, slot, ids, body)
        if op == Op.F_BIND:
            forall, slot, tp, dom, body = code[pc + 1:pc + 6]
            h = self._t(tp)
            if h == UNSUPPORTED:
                return -1
            if dom != Op.LET and not self._in_dom(h, dom):
                return forall
            self.slots[slot] = h
            return self._f(body)
        if op == Op.F_SOLVE:
            return self._solve(pc)
        raise RuntimeError(f"bad opcode {op} at {pc}")

    def _loop(self, forall, slot, ids, body):
        slots = self.slots
        for i in ids:
            slots[slot] = i
            r = self._f(body)
            if r != forall:
                return r
        return forall

    def _solve(self, pc):
        code = self.code
        forall, rows, cols, tp, body, n = code[pc + 1:pc + 7]
        size = rows * cols
        h = self._t(tp)
        if h == UNSUPPORTED:
            return -1
        key = self._key(h)
        entries = [0] * size
        if self.zfm:
            if key[0] != 0 or key[1] != size:
                return forall
            cells = code[pc + 7 + 3 * n:pc + 7 + 3 * n + size]
            seen = [False] * size
            for m in key[3:]:
                hit = self.rev.get(m)
                if hit is None:
                    return forall
                try:
                    p = cells.index(hit[0])
                except ValueError:
                    return forall
                if seen[p]:
                    return forall
                seen[p] = True
                entries[p] = hit[1]
        else:
            if key[0] != 1 or key[1] != rows or key[2] != cols:
                return forall
            entries = list(key[3:3 + size])
        base = pc + 7
        for k in range(n):
            slot, p, dom = code[base + 3 * k:base + 3 * k + 3]
            if not self._in_dom(entries[p], dom):
                return forall
        for k in range(n):
            slot, p = code[base + 3 * k], code[base + 3 * k + 1]
            self.slots[slot] = entries[p]
        return self._f(body)
