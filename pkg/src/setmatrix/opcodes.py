"""Opcodes shared by both kernels (duplicated as an enum in the Cython source)."""

__all__ = ["Op"]


class Op:
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

    # member filters for qmem
    M_ALL = 0
    M_SETS = 1
    M_IN_ALL = 2
    M_IN_SET = 3

    @classmethod
    def table(cls) -> dict[str, int]:
        return {k: v for k, v in vars(cls).items() if k.isupper()}
