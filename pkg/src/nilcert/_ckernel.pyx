# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled collector.  Same algorithm as ``_pykernel``; see there."""

from libc.stdlib cimport malloc, realloc, free

import numpy as np
cimport numpy as cnp

BACKEND = "cython"


cdef struct Tables:
    int p
    int n
    int *pw_vec       # n*n
    int *pw_off       # n+1
    int *pw_flat
    int *conj_off     # n*n+1, index j*n+i
    int *conj_flat


cdef class _Packed:
    cdef Tables t
    cdef object keep

    def __cinit__(self, tables):
        p, n, pw_vec, pw_letters, conj_letters = tables
        pv = np.zeros(max(n * n, 1), dtype=np.intc)
        for i in range(n):
            for j in range(n):
                pv[i * n + j] = pw_vec[i][j]
        pw_off = np.zeros(n + 1, dtype=np.intc)
        flat = []
        for i in range(n):
            flat.extend(pw_letters[i])
            pw_off[i + 1] = len(flat)
        pw_flat = np.array(flat + [0], dtype=np.intc)
        conj_off = np.zeros(n * n + 1, dtype=np.intc)
        flat = []
        for j in range(n):
            for i in range(n):
                if i < j:
                    flat.extend(conj_letters[j][i])
                conj_off[j * n + i + 1] = len(flat)
        conj_flat = np.array(flat + [0], dtype=np.intc)
        self.keep = (pv, pw_off, pw_flat, conj_off, conj_flat)
        self.t.p = p
        self.t.n = n
        self.t.pw_vec = <int *> cnp.PyArray_DATA(pv)
        self.t.pw_off = <int *> cnp.PyArray_DATA(pw_off)
        self.t.pw_flat = <int *> cnp.PyArray_DATA(pw_flat)
        self.t.conj_off = <int *> cnp.PyArray_DATA(conj_off)
        self.t.conj_flat = <int *> cnp.PyArray_DATA(conj_flat)


cdef int _push(int **stack, int *size, int *cap, int *src, int count) except -1:
    cdef int k
    cdef int *grown
    if size[0] + count > cap[0]:
        while size[0] + count > cap[0]:
            cap[0] *= 2
        grown = <int *> realloc(stack[0], cap[0] * sizeof(int))
        if grown == NULL:
            raise MemoryError()
        stack[0] = grown
    for k in range(count):
        stack[0][size[0] + k] = src[k]
    size[0] += count
    return 0


cdef int _collect(Tables *t, int *e, int *letters, int nletters) except -1:
    cdef int p = t.p, n = t.n
    cdef int cap = 64, size = 0
    cdef int *stack = <int *> malloc(cap * sizeof(int))
    cdef int i, j, k, ej, ei, start, length
    cdef bint tail
    if stack == NULL:
        raise MemoryError()
    try:
        for k in range(nletters):
            _push(&stack, &size, &cap, &letters[nletters - 1 - k], 1)
        while size > 0:
            size -= 1
            i = stack[size]
            tail = False
            for j in range(n - 1, i, -1):
                ej = e[j]
                if ej:
                    tail = True
                    start = t.conj_off[j * n + i]
                    length = t.conj_off[j * n + i + 1] - start
                    for k in range(ej):
                        _push(&stack, &size, &cap, &t.conj_flat[start], length)
                    e[j] = 0
            ei = e[i] + 1
            if ei == p:
                e[i] = 0
                if tail:
                    start = t.pw_off[i]
                    length = t.pw_off[i + 1] - start
                    _push(&stack, &size, &cap, &t.pw_flat[start], length)
                else:
                    for j in range(i + 1, n):
                        e[j] = t.pw_vec[i * n + j]
            else:
                e[i] = ei
    finally:
        free(stack)
    return 0


def pack(tables):
    return _Packed(tables)


def collect(_Packed packed, exps, letters):
    cdef int n = packed.t.n
    cdef Py_ssize_t m = len(letters), k
    cdef int *e = <int *> malloc((n + 1) * sizeof(int))
    cdef int *w = <int *> malloc((m + 1) * sizeof(int))
    if e == NULL or w == NULL:
        free(e)
        free(w)
        raise MemoryError()
    try:
        for k in range(n):
            e[k] = exps[k]
        for k in range(m):
            w[k] = letters[k]
        _collect(&packed.t, e, w, <int> m)
        return [e[k] for k in range(n)]
    finally:
        free(e)
        free(w)


def mul_gen_table(_Packed packed, order):
    cdef int p = packed.t.p, n = packed.t.n
    cdef long x, y, code
    cdef int i, j
    cdef int buf[64]
    cdef int letter[1]
    cdef cnp.ndarray[cnp.int64_t, ndim=2] out = np.zeros((order, max(n, 1)), dtype=np.int64)
    if n > 64:
        raise ValueError("at most 64 generators")
    for x in range(order):
        for i in range(n):
            y = x
            for j in range(n):
                buf[j] = y % p
                y //= p
            letter[0] = i
            _collect(&packed.t, buf, letter, 1)
            code = 0
            for j in range(n - 1, -1, -1):
                code = code * p + buf[j]
            out[x, i] = code
    return out[:, :n]
