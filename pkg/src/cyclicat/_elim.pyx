# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled fraction-free sparse row elimination (see ``_elim_py``)."""
from bisect import insort
from math import gcd


cdef dict _primitive(dict row, Py_ssize_t pivot):
    cdef object g = 0
    cdef object v
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            break
    if row[pivot] < 0:
        g = -g
    if g != 1:
        for c in row:
            row[c] //= g
    return row


cdef tuple _combine(dict row, dict prow, Py_ssize_t p):
    cdef object a = prow[p]
    cdef object b = row[p]
    cdef object g = gcd(a, b)
    cdef object v, w
    cdef dict out
    a //= g
    b //= g
    if a == 1:
        out = row.copy()
    else:
        out = {c: a * v for c, v in row.items()}
    for c, v in prow.items():
        w = out.get(c, 0) - b * v
        if w:
            out[c] = w
        else:
            del out[c]
    return out, a


cdef tuple _reduce(dict piv, list order, dict row):
    cdef object scale = 1
    cdef Py_ssize_t p
    for p in order:
        if not row:
            break
        if p in row:
            row, a = _combine(row, <dict>piv[p], p)
            scale *= a
    return row, scale


def echelon(rows):
    cdef dict piv = {}
    cdef list order = []
    cdef dict r
    cdef Py_ssize_t p
    for r0 in rows:
        if not r0:
            continue
        r, _ = _reduce(piv, order, dict(r0))
        if r:
            p = min(r)
            piv[p] = _primitive(r, p)
            insort(order, p)
    return order, piv


def reduce_row(list pivots, dict table, row):
    return _reduce(table, pivots, dict(row))


def rref(list pivots, dict table):
    cdef dict out = {p: dict(table[p]) for p in pivots}
    cdef Py_ssize_t i, p, q
    cdef dict prow, r
    for i in range(len(pivots) - 1, -1, -1):
        p = pivots[i]
        prow = out[p]
        for q in pivots[:i]:
            r = out[q]
            if p in r:
                r, _ = _combine(r, prow, p)
                out[q] = _primitive(r, q)
    return out
