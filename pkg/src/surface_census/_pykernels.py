"""Pure-Python implementations of the search kernels.

Same signatures as the compiled ``_ckernels`` module; used when the extension
is unavailable or ``SURFACE_CENSUS_PURE_PYTHON`` is set.
"""
from __future__ import annotations

import numpy as np

_cache: list = [None, None]


def _rows(table: np.ndarray) -> list[list[int]]:
    if _cache[0] is not table:
        _cache[0] = table
        _cache[1] = table.tolist()
    return _cache[1]


def closure(table, gens):
    rows = _rows(table)
    gens = [int(g) for g in gens]
    seen = {0}
    out = [0]
    i = 0
    while i < len(out):
        row = rows[out[i]]
        i += 1
        for g in gens:
            y = row[g]
            if y not in seen:
                seen.add(y)
                out.append(y)
    return np.asarray(out, dtype=np.int32)


def _generates(rows, gens, n):
    seen = bytearray(n)
    seen[0] = 1
    out = [0]
    i = 0
    while i < len(out):
        row = rows[out[i]]
        i += 1
        for g in gens:
            y = row[g]
            if not seen[y]:
                seen[y] = 1
                out.append(y)
    return len(out) == n


def enumerate_tuples(table, inv, orders, classes, last_order):
    """Tuples (c_1..c_k) with c_j in classes[j], c_k = (c_1...c_{k-1})^-1 of order
    ``last_order``, generating the group. Lexicographic order."""
    rows = _rows(table)
    inv = inv.tolist()
    orders = orders.tolist()
    classes = [c.tolist() for c in classes]
    n = len(rows)
    depth = len(classes)
    out = []
    prefix = [0] * depth

    def rec(level, prod):
        if level == depth:
            last = inv[prod]
            if orders[last] != last_order:
                return
            if _generates(rows, prefix, n):
                out.append(prefix + [last])
            return
        row = rows[prod]
        for c in classes[level]:
            prefix[level] = c
            rec(level + 1, row[c])

    rec(0, 0)
    if not out:
        return np.zeros((0, depth + 1), dtype=np.int32)
    return np.asarray(out, dtype=np.int32)


def extend_hom(src_table, dst_table, gens, images):
    """Extend gens -> images to a map on the whole source group.

    Returns the element map if it is a well-defined injective homomorphism,
    else None. Every Cayley-graph edge x -> x*g is checked, which is exactly
    the homomorphism condition on a generating set.
    """
    src = _rows(src_table)
    dst = dst_table.tolist() if dst_table is not src_table else src
    n = len(src)
    gens = [int(g) for g in gens]
    images = [int(h) for h in images]
    phi = [-1] * n
    used = bytearray(len(dst))
    phi[0] = 0
    used[0] = 1
    queue = [0]
    i = 0
    while i < len(queue):
        x = queue[i]
        i += 1
        fx = phi[x]
        srow = src[x]
        drow = dst[fx]
        for g, h in zip(gens, images):
            y = srow[g]
            fy = drow[h]
            if phi[y] < 0:
                if used[fy]:
                    return None
                phi[y] = fy
                used[fy] = 1
                queue.append(y)
            elif phi[y] != fy:
                return None
    if len(queue) != n:
        return None
    return np.asarray(phi, dtype=np.int32)


def element_orders(table):
    rows = _rows(table)
    n = len(rows)
    out = [0] * n
    for x in range(n):
        y = x
        k = 1
        while y != 0:
            y = rows[y][x]
            k += 1
        out[x] = k
    out[0] = 1
    return np.asarray(out, dtype=np.int32)
