# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled kernel.  Same table layout, program encoding and results as
``setmatrix._pykernel``; see that module for the description."""

from libcpp.vector cimport vector
from libc.stdint cimport uint64_t

COMPILED = True

cdef enum:
    T_SLOT = 1
    T_CONST = 2
    T_MK = 3
    F_TRUE = 10
    F_FALSE = 11
    F_EQ = 12
    F_MEM = 13
    F_NOT = 14
    F_AND = 15
    F_OR = 16
    F_IMP = 17
    F_IFF = 18
    F_QDOM = 19
    F_QMEM = 20
    F_BIND = 21
    F_SOLVE = 22
    DOM_ALL = 0
    DOM_SET = 1
    LET = -1
    M_ALL = 0
    M_SETS = 1
    M_IN_ALL = 2
    M_IN_SET = 3
    UNSUP = -1073741824

UNSUPPORTED = UNSUP

OPCODES = dict(
    T_SLOT=T_SLOT, T_CONST=T_CONST, T_MK=T_MK, F_TRUE=F_TRUE, F_FALSE=F_FALSE,
    F_EQ=F_EQ, F_MEM=F_MEM, F_NOT=F_NOT, F_AND=F_AND, F_OR=F_OR, F_IMP=F_IMP,
    F_IFF=F_IFF, F_QDOM=F_QDOM, F_QMEM=F_QMEM, F_BIND=F_BIND, F_SOLVE=F_SOLVE,
    DOM_ALL=DOM_ALL, DOM_SET=DOM_SET, LET=LET, M_ALL=M_ALL, M_SETS=M_SETS,
    M_IN_ALL=M_IN_ALL, M_IN_SET=M_IN_SET,
)


cdef inline uint64_t _hash(const int* p, int n) nogil:
    cdef uint64_t h = 1469598103934665603ULL
    cdef int i
    for i in range(n):
        h ^= <uint64_t><unsigned int>p[i]
        h *= 1099511628211ULL
    return h


cdef class Kernel:
    cdef bint zfm
    # table
    cdef vector[int] keypool, keyoff, keylen
    cdef vector[int] canonpool, canonoff, canonlen
    cdef vector[char] is_set, in_all, in_set
    cdef vector[int] htab
    cdef size_t hmask
    cdef vector[int] dom_all, dom_set
    # encoded-model pair tables
    cdef vector[vector[int]] kp
    cdef vector[int] rev_cell, rev_e
    # run state
    cdef vector[int] code
    cdef vector[int] slots
    cdef vector[vector[int]] bufs
    cdef vector[int] scratch

    def __cinit__(self, bint zfm):
        self.zfm = zfm
        self.htab.assign(1024, -1)
        self.hmask = 1023

    # ---------------------------------------------------------------- table

    cdef int _find(self, const int* key, int n):
        cdef size_t i = _hash(key, n) & self.hmask
        cdef int id_, j
        while True:
            id_ = self.htab[i]
            if id_ < 0:
                return -1
            if self.keylen[id_] == n:
                j = 0
                while j < n and self.keypool[self.keyoff[id_] + j] == key[j]:
                    j += 1
                if j == n:
                    return id_
            i = (i + 1) & self.hmask

    cdef void _place(self, int id_):
        cdef size_t i = _hash(&self.keypool[self.keyoff[id_]], self.keylen[id_]) & self.hmask
        while self.htab[i] >= 0:
            i = (i + 1) & self.hmask
        self.htab[i] = id_

    cdef void _grow(self):
        cdef size_t cap = self.htab.size() * 2
        cdef int i
        self.htab.assign(cap, -1)
        self.hmask = cap - 1
        for i in range(<int>self.keyoff.size()):
            self._place(i)

    def add(self, key, canon, is_set):
        cdef vector[int] k = key
        cdef int got = self._find(k.data(), <int>k.size()) if k.size() else -1
        if got >= 0:
            return got
        cdef int id_ = <int>self.keyoff.size()
        # A typed local: pushing a conditional expression straight into a
        # vector[char] binds a reference to a dead temporary.
        cdef char flag = 1 if is_set else 0
        cdef char zero = 0
        self.keyoff.push_back(<int>self.keypool.size())
        self.keylen.push_back(<int>k.size())
        for x in k:
            self.keypool.push_back(x)
        self.canonoff.push_back(<int>self.canonpool.size())
        self.canonlen.push_back(len(canon))
        for x in canon:
            self.canonpool.push_back(x)
        self.is_set.push_back(flag)
        self.in_all.push_back(zero)
        self.in_set.push_back(zero)
        self.rev_cell.push_back(-1)
        self.rev_e.push_back(-1)
        if 2 * (<size_t>id_ + 1) > self.htab.size():
            self._grow()
        else:
            self._place(id_)
        return id_

    def lookup(self, key):
        cdef vector[int] k = key
        return self._find(k.data(), <int>k.size())

    def size(self):
        return <int>self.keyoff.size()

    def info(self, int h):
        """``(key, members, is_set, in_all, in_set)`` for id ``h``; for tests."""
        key = [self.keypool[self.keyoff[h] + i] for i in range(self.keylen[h])]
        canon = [self.canonpool[self.canonoff[h] + i] for i in range(self.canonlen[h])]
        return key, canon, bool(self.is_set[h]), bool(self.in_all[h]), bool(self.in_set[h])

    def set_domains(self, all_ids, set_ids):
        cdef int i
        self.dom_all = all_ids
        self.dom_set = set_ids
        for i in range(<int>self.in_all.size()):
            self.in_all[i] = 0
            self.in_set[i] = 0
        for i in self.dom_all:
            self.in_all[i] = 1
        for i in self.dom_set:
            self.in_set[i] = 1

    def set_kp(self, int cell, int e, int kp):
        while <int>self.kp.size() <= cell:
            self.kp.push_back(vector[int]())
        if <int>self.kp[cell].size() <= e:
            self.kp[cell].resize(e + 1, -1)
        self.kp[cell][e] = kp
        self.rev_cell[kp] = cell
        self.rev_e[kp] = e

    # ---------------------------------------------------------------- run

    def run(self, code, int root, int nslots, int nbufs, init_slots=()):
        cdef int i
        self.code = code
        self.slots.assign(nslots, 0)
        i = 0
        for v in init_slots:
            self.slots[i] = v
            i += 1
        self.bufs.resize(nbufs)
        cdef int r = self._f(root)
        return (-1 if r < 0 else r), [self.slots[i] for i in range(nslots)]

    cdef inline const int* _kidptr(self, int h, int* n):
        # Pointer to the key of handle h and its length.
        if h >= 0:
            n[0] = self.keylen[h]
            return &self.keypool[self.keyoff[h]]
        n[0] = <int>self.bufs[-h - 1].size()
        return self.bufs[-h - 1].data()

    cdef int _t(self, int pc):
        cdef int* c = self.code.data()
        cdef int op = c[pc]
        if op == T_SLOT:
            return self.slots[c[pc + 1]]
        if op == T_CONST:
            return c[pc + 1]
        cdef int rows = c[pc + 1], cols = c[pc + 2], buf = c[pc + 3]
        cdef int n = rows * cols, k, a, cell, kid, j, tmp
        cdef vector[int]* b = &self.bufs[buf]
        b.resize(3 + n)
        if self.zfm:
            b[0][0] = 0
            b[0][1] = n
            b[0][2] = 0
        else:
            b[0][0] = 1
            b[0][1] = rows
            b[0][2] = cols
        for k in range(n):
            a = self._t(c[pc + 4 + k])
            c = self.code.data()
            if a < 0:
                return UNSUP
            if self.zfm:
                cell = c[pc + 4 + n + k]
                if cell >= <int>self.kp.size() or a >= <int>self.kp[cell].size():
                    return UNSUP
                kid = self.kp[cell][a]
                if kid < 0:
                    return UNSUP
                # insertion sort as we go
                j = k
                while j > 0 and b[0][3 + j - 1] > kid:
                    b[0][3 + j] = b[0][3 + j - 1]
                    j -= 1
                b[0][3 + j] = kid
            else:
                b[0][3 + k] = a
        kid = self._find(b.data(), 3 + n)
        if kid >= 0:
            return kid
        return -(buf + 1)

    cdef inline bint _in_dom(self, int h, int dom):
        if h < 0:
            return False
        if dom == DOM_SET:
            return self.in_set[h] != 0
        return self.in_all[h] != 0

    cdef int _f(self, int pc):
        cdef int* c = self.code.data()
        cdef int op = c[pc]
        cdef int a, b, r, s, k, n, na, nb, lo, hi, mid
        cdef const int* pa
        cdef const int* pb
        if op == F_EQ:
            a = self._t(c[pc + 1])
            b = self._t(c[pc + 2])
            if a == UNSUP or b == UNSUP:
                return -1
            if a >= 0 and b >= 0:
                return a == b
            if a < 0 and b < 0:
                return self.bufs[-a - 1] == self.bufs[-b - 1]
            return 0
        if op == F_MEM:
            a = self._t(c[pc + 1])
            b = self._t(c[pc + 2])
            if a == UNSUP or b == UNSUP:
                return -1
            if a < 0:
                return 0
            if b >= 0:
                if not self.zfm and not self.is_set[b]:
                    return 0
            elif not self.zfm:
                return 0
            pb = self._kidptr(b, &nb)
            lo = 3
            hi = nb
            while lo < hi:
                mid = (lo + hi) >> 1
                if pb[mid] < a:
                    lo = mid + 1
                else:
                    hi = mid
            return lo < nb and pb[lo] == a
        if op == F_TRUE:
            return 1
        if op == F_FALSE:
            return 0
        if op == F_NOT:
            r = self._f(c[pc + 1])
            return r if r < 0 else 1 - r
        if op == F_AND or op == F_OR:
            s = 0 if op == F_AND else 1
            n = c[pc + 1]
            for k in range(n):
                r = self._f(self.code[pc + 2 + k])
                if r < 0 or r == s:
                    return r
            return 1 - s
        if op == F_IMP:
            r = self._f(c[pc + 1])
            if r != 1:
                return r if r < 0 else 1
            return self._f(self.code[pc + 2])
        if op == F_IFF:
            r = self._f(c[pc + 1])
            if r < 0:
                return r
            s = self._f(self.code[pc + 2])
            if s < 0:
                return s
            return r == s
        if op == F_QDOM:
            return self._qdom(pc)
        if op == F_QMEM:
            return self._qmem(pc)
        if op == F_BIND:
            a = self._t(c[pc + 3])
            if a == UNSUP:
                return -1
            c = self.code.data()
            if c[pc + 4] != LET and not self._in_dom(a, c[pc + 4]):
                return c[pc + 1]
            self.slots[c[pc + 2]] = a
            return self._f(c[pc + 5])
        if op == F_SOLVE:
            return self._solve(pc)
        return -1

    cdef int _qdom(self, int pc):
        cdef int forall = self.code[pc + 1], slot = self.code[pc + 2]
        cdef int body = self.code[pc + 4]
        cdef vector[int]* ids = &self.dom_set if self.code[pc + 3] == DOM_SET else &self.dom_all
        cdef size_t i
        cdef int r
        for i in range(ids.size()):
            self.slots[slot] = ids[0][i]
            r = self._f(body)
            if r != forall:
                return r
        return forall

    cdef int _qmem(self, int pc):
        cdef int forall = self.code[pc + 1], slot = self.code[pc + 2]
        cdef int filt = self.code[pc + 4], body = self.code[pc + 5]
        cdef int h = self._t(self.code[pc + 3])
        cdef int i, m, r, n, off
        cdef vector[int] ids
        if h == UNSUP:
            return -1
        if h >= 0:
            if not self.zfm and not self.is_set[h]:
                return forall
            off = self.canonoff[h]
            n = self.canonlen[h]
            for i in range(n):
                ids.push_back(self.canonpool[off + i])
        else:
            if not self.zfm:
                return forall
            if filt == M_ALL or filt == M_SETS:
                return -1
            n = <int>self.bufs[-h - 1].size()
            for i in range(3, n):
                ids.push_back(self.bufs[-h - 1][i])
        for i in range(<int>ids.size()):
            m = ids[i]
            if filt == M_SETS and not self.is_set[m]:
                continue
            if filt == M_IN_ALL and not self.in_all[m]:
                continue
            if filt == M_IN_SET and not self.in_set[m]:
                continue
            self.slots[slot] = m
            r = self._f(body)
            if r != forall:
                return r
        return forall

    cdef int _solve(self, int pc):
        cdef int forall = self.code[pc + 1], rows = self.code[pc + 2], cols = self.code[pc + 3]
        cdef int body = self.code[pc + 5], n = self.code[pc + 6]
        cdef int size = rows * cols, base = pc + 7, cbase = pc + 7 + 3 * n
        cdef int h = self._t(self.code[pc + 4])
        cdef int nk, k, m, p, q, cell
        cdef const int* key
        cdef vector[int] entries
        if h == UNSUP:
            return -1
        key = self._kidptr(h, &nk)
        entries.assign(size, -1)
        if self.zfm:
            if key[0] != 0 or key[1] != size:
                return forall
            for k in range(size):
                m = key[3 + k]
                cell = self.rev_cell[m]
                if cell < 0:
                    return forall
                p = -1
                for q in range(size):
                    if self.code[cbase + q] == cell:
                        p = q
                        break
                if p < 0 or entries[p] >= 0:
                    return forall
                entries[p] = self.rev_e[m]
        else:
            if key[0] != 1 or key[1] != rows or key[2] != cols:
                return forall
            for k in range(size):
                entries[k] = key[3 + k]
        for k in range(n):
            if not self._in_dom(entries[self.code[base + 3 * k + 1]], self.code[base + 3 * k + 2]):
                return forall
        for k in range(n):
            self.slots[self.code[base + 3 * k]] = entries[self.code[base + 3 * k + 1]]
        return self._f(body)
