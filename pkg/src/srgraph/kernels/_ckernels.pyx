# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled search kernels; same contracts as ``_pykernels``."""

from itertools import combinations_with_replacement
from libc.stdlib cimport malloc, free

from ._pykernels import BudgetExceeded


cdef bint _go(int j, int n, int k, int ell, char* eq, char* st, int* state, set seen):
    cdef int i, c
    cdef bytes key
    if j == n:
        for i in range(k):
            if state[i] >= 0:
                return True
        return False
    key = bytes([j]) + bytes([state[i] + 1 for i in range(k)])
    if key in seen:
        return False
    for i in range(k):
        c = state[i]
        if c == 0 and eq[j * k + i]:
            state[i] = -1
            if _go(j + 1, n, k, ell, eq, st, state, seen):
                return True
            state[i] = 0
        if c >= 0 and c < ell and st[j * k + i]:
            state[i] = c + 1
            if _go(j + 1, n, k, ell, eq, st, state, seen):
                return True
            state[i] = c
    seen.add(key)
    return False


def ab_feasible(eq, st, int ell):
    cdef int n = len(eq)
    cdef int k
    cdef int i, j
    cdef char* e
    cdef char* s
    cdef int* state
    if n == 0:
        return True
    k = len(eq[0])
    if k == 0:
        return False
    if n > k * ell:
        return False
    if ell > 250 or n > 250:
        from ._pykernels import ab_feasible as slow
        return slow(eq, st, ell)
    e = <char*> malloc(n * k)
    s = <char*> malloc(n * k)
    state = <int*> malloc(k * sizeof(int))
    try:
        for j in range(n):
            for i in range(k):
                e[j * k + i] = 1 if eq[j][i] else 0
                s[j * k + i] = 1 if st[j][i] else 0
        for i in range(k):
            state[i] = 0
        return _go(0, n, k, ell, e, s, state, set())
    finally:
        free(e)
        free(s)
        free(state)


cimport cython


@cython.wraparound(True)
@cython.boundscheck(True)
def longest_descent(tuple start, succ, int ell, long budget, dict memo):
    cdef dict groups = {}
    cdef list todo = [start]      # multisets awaiting a value
    cdef list kids_of = [None]    # their successor lists once expanded
    cdef tuple ms, rest, grp, m
    cdef list kids, gs
    cdef Py_ssize_t idx
    cdef int size, best, v
    cdef bint missing
    while todo:
        ms = <tuple> todo[-1]
        kids = <list> kids_of[-1] if kids_of[-1] is not None else None
        if ms in memo:
            todo.pop()
            kids_of.pop()
            continue
        if len(ms) == 0:
            memo[ms] = 0
            todo.pop()
            kids_of.pop()
            continue
        if kids is None:
            kids = []
            prev = None
            for idx in range(len(ms)):
                e = ms[idx]
                if e == prev:
                    continue
                prev = e
                rest = ms[:idx] + ms[idx + 1:]
                gs = groups.get(e)
                if gs is None:
                    gs = [()]
                    for size in range(1, ell + 1):
                        gs.extend(combinations_with_replacement(succ[e], size))
                    groups[e] = gs
                for grp in gs:
                    kids.append(tuple(sorted(rest + grp)) if len(grp) else rest)
            kids_of[-1] = kids
            if len(memo) + len(kids) > budget and any(k not in memo for k in kids):
                raise BudgetExceeded(f"more than {budget} multisets")
        missing = False
        for m in kids:
            if m not in memo:
                missing = True
                todo.append(m)
                kids_of.append(None)
        if missing:
            continue
        best = 0
        for m in kids:
            v = memo[m]
            if v > best:
                best = v
        memo[ms] = 1 + best
        todo.pop()
        kids_of.pop()
    return memo[start]
