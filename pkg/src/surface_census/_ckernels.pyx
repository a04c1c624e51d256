# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernels; see _pykernels for the reference semantics."""
import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

cnp.import_array()

ctypedef cnp.int32_t i32


def closure(const i32[:, ::1] table, gens):
    cdef Py_ssize_t n = table.shape[0]
    cdef i32[::1] g = np.ascontiguousarray(gens, dtype=np.int32)
    cdef Py_ssize_t ng = g.shape[0]
    cdef cnp.ndarray[i32, ndim=1] out = np.empty(n, dtype=np.int32)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] seen = np.zeros(n, dtype=np.uint8)
    cdef Py_ssize_t head = 0, tail = 1, j
    cdef i32 x, y
    out[0] = 0
    seen[0] = 1
    while head < tail:
        x = out[head]
        head += 1
        for j in range(ng):
            y = table[x, g[j]]
            if not seen[y]:
                seen[y] = 1
                out[tail] = y
                tail += 1
    return out[:tail].copy()


cdef bint _generates(const i32[:, ::1] table, i32* gens, int ng, i32* queue,
                     unsigned int* stamp, unsigned int mark) nogil:
    cdef Py_ssize_t n = table.shape[0]
    cdef Py_ssize_t head = 0, tail = 1
    cdef int j
    cdef i32 x, y
    queue[0] = 0
    stamp[0] = mark
    while head < tail:
        x = queue[head]
        head += 1
        for j in range(ng):
            y = table[x, gens[j]]
            if stamp[y] != mark:
                stamp[y] = mark
                queue[tail] = y
                tail += 1
    return tail == n


def enumerate_tuples(const i32[:, ::1] table, inv, orders, classes, int last_order):
    cdef Py_ssize_t n = table.shape[0]
    cdef i32[::1] inv_v = np.ascontiguousarray(inv, dtype=np.int32)
    cdef i32[::1] ord_v = np.ascontiguousarray(orders, dtype=np.int32)
    cdef int depth = len(classes)
    cdef list cls = [np.ascontiguousarray(c, dtype=np.int32) for c in classes]
    cdef i32** cptr = <i32**> malloc(depth * sizeof(i32*))
    cdef int* clen = <int*> malloc(depth * sizeof(int))
    cdef int* pos = <int*> malloc(depth * sizeof(int))
    cdef i32* prod = <i32*> malloc((depth + 1) * sizeof(i32))
    cdef i32* prefix = <i32*> malloc(depth * sizeof(i32))
    cdef i32* queue = <i32*> malloc(n * sizeof(i32))
    cdef unsigned int* stamp = <unsigned int*> malloc(n * sizeof(unsigned int))
    cdef unsigned int mark = 0
    cdef i32[::1] view
    cdef int level, i
    cdef i32 last
    cdef list found = []
    try:
        for i in range(n):
            stamp[i] = 0
        for i in range(depth):
            view = cls[i]
            clen[i] = view.shape[0]
            cptr[i] = &view[0] if clen[i] > 0 else NULL
            if clen[i] == 0:
                return np.zeros((0, depth + 1), dtype=np.int32)
        prod[0] = 0
        level = 0
        pos[0] = -1
        while level >= 0:
            pos[level] += 1
            if pos[level] >= clen[level]:
                level -= 1
                continue
            prefix[level] = cptr[level][pos[level]]
            prod[level + 1] = table[prod[level], prefix[level]]
            if level + 1 < depth:
                level += 1
                pos[level] = -1
                continue
            last = inv_v[prod[depth]]
            if ord_v[last] != last_order:
                continue
            mark += 1
            if _generates(table, prefix, depth, queue, stamp, mark):
                found.append(tuple([prefix[i] for i in range(depth)] + [last]))
    finally:
        free(cptr); free(clen); free(pos); free(prod); free(prefix); free(queue); free(stamp)
    if not found:
        return np.zeros((0, depth + 1), dtype=np.int32)
    return np.asarray(found, dtype=np.int32)


def extend_hom(const i32[:, ::1] src, const i32[:, ::1] dst, gens, images):
    cdef Py_ssize_t n = src.shape[0]
    cdef i32[::1] g = np.ascontiguousarray(gens, dtype=np.int32)
    cdef i32[::1] h = np.ascontiguousarray(images, dtype=np.int32)
    cdef Py_ssize_t ng = g.shape[0]
    cdef cnp.ndarray[i32, ndim=1] phi = np.full(n, -1, dtype=np.int32)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] used = np.zeros(dst.shape[0], dtype=np.uint8)
    cdef cnp.ndarray[i32, ndim=1] queue = np.empty(n, dtype=np.int32)
    cdef Py_ssize_t head = 0, tail = 1, j
    cdef i32 x, fx, y, fy
    phi[0] = 0
    used[0] = 1
    queue[0] = 0
    while head < tail:
        x = queue[head]
        head += 1
        fx = phi[x]
        for j in range(ng):
            y = src[x, g[j]]
            fy = dst[fx, h[j]]
            if phi[y] < 0:
                if used[fy]:
                    return None
                phi[y] = fy
                used[fy] = 1
                queue[tail] = y
                tail += 1
            elif phi[y] != fy:
                return None
    if tail != n:
        return None
    return phi


def element_orders(const i32[:, ::1] table):
    cdef Py_ssize_t n = table.shape[0]
    cdef cnp.ndarray[i32, ndim=1] out = np.empty(n, dtype=np.int32)
    cdef Py_ssize_t x
    cdef i32 y, k
    for x in range(n):
        y = <i32> x
        k = 1
        while y != 0:
            y = table[y, x]
            k += 1
        out[x] = k
    return out
