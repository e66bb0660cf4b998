"""Fraction-free sparse row elimination over the integers.

Pure-Python twin of the compiled ``_elim`` extension.  A row is a dict
mapping column index to a nonzero ``int``.  Rows stored in an echelon are
primitive (content 1) with a positive pivot, and the pivot of a row is its
smallest column.
"""
from bisect import insort
from math import gcd

__all__ = ["echelon", "reduce_row", "rref"]


def _primitive(row, pivot):
    g = 0
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


def _combine(row, prow, p):
    """Return (a*row - b*prow, a) with column p cleared; a > 0."""
    a = prow[p]
    b = row[p]
    g = gcd(a, b)
    a //= g
    b //= g
    if a == 1:
        out = dict(row)
    else:
        out = {c: a * v for c, v in row.items()}
    for c, v in prow.items():
        w = out.get(c, 0) - b * v
        if w:
            out[c] = w
        else:
            del out[c]
    return out, a


def _reduce(piv, order, row):
    scale = 1
    for p in order:
        if not row:
            break
        if p in row:
            row, a = _combine(row, piv[p], p)
            scale *= a
    return row, scale


def echelon(rows):
    """Row echelon form of an iterable of integer rows.

    Returns ``(pivots, table)`` where ``pivots`` is the ascending list of
    pivot columns and ``table[p]`` the row with pivot ``p``.  Rows are
    eliminated against existing pivots in ascending order, so each stored row
    is zero in every earlier pivot column.
    """
    piv = {}
    order = []
    for r in rows:
        if not r:
            continue
        r, _ = _reduce(piv, order, dict(r))
        if r:
            p = min(r)
            piv[p] = _primitive(r, p)
            insort(order, p)
    return order, piv


def reduce_row(pivots, table, row):
    """Reduce ``row`` modulo the span of an echelon.

    Returns ``(residue, scale)`` with ``residue = scale*row - combination``;
    the residue vanishes on every pivot column.
    """
    return _reduce(table, pivots, dict(row))


def rref(pivots, table):
    """Fully reduced form: each pivot column is zero outside its own row."""
    out = {p: dict(table[p]) for p in pivots}
    for i in range(len(pivots) - 1, -1, -1):
        p = pivots[i]
        prow = out[p]
        for q in pivots[:i]:
            r = out[q]
            if p in r:
                r, _ = _combine(r, prow, p)
                out[q] = _primitive(r, q)
    return out
