"""Chain complexes, bicomplexes, totalisation and mapping cones over Q.

A complex carries its differential degree: ``-1`` for chain complexes
(``d_n: C_n -> C_{n-1}``) and ``+1`` for cochain complexes.  Differentials
that leave the degree range are zero maps.
"""
from cyclicat.exactlin import SparseMatrix, block_sized, rank, solve_in_image

__all__ = [
    "ComplexError", "DegreeError", "ChainComplex", "Bicomplex", "total_complex",
    "ChainMap", "mapping_cone", "is_quasi_iso", "homology_dim",
]


class ComplexError(ValueError):
    """d^2 != 0, a non-commuting square, or a map that is not a chain map."""


class DegreeError(IndexError):
    """A degree outside the complex's range."""


class ChainComplex:
    """Finite complex on degrees ``lo .. lo+len(dims)-1``.

    ``diffs[n]`` is the differential leaving degree n.
    """

    def __init__(self, dims, diffs=None, lo=0, degree=-1, name=None, check=True):
        if degree not in (-1, 1):
            raise ValueError("differential degree must be -1 or +1")
        self.dims = list(dims)
        self.lo = lo
        self.degree = degree
        self.name = name or "C"
        self._d = {}
        self._rank = {}
        for n, m in (diffs or {}).items():
            if not self.in_range(n) or not self.in_range(n + degree):
                if m.nnz:
                    raise ComplexError("nonzero differential leaving degree %d leaves the range" % n)
                continue
            if m.shape != (self.dim(n + degree), self.dim(n)):
                raise ValueError("differential at degree %d has shape %s, expected %s"
                                 % (n, m.shape, (self.dim(n + degree), self.dim(n))))
            self._d[n] = m
        if check:
            self.verify()

    @property
    def hi(self):
        return self.lo + len(self.dims) - 1

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def in_range(self, n):
        return self.lo <= n <= self.hi

    def dim(self, n):
        return self.dims[n - self.lo] if self.in_range(n) else 0

    def d(self, n):
        """Differential leaving degree n (a zero matrix off the range)."""
        m = self._d.get(n)
        if m is None:
            return SparseMatrix.zeros(self.dim(n + self.degree), self.dim(n))
        return m

    def rank_d(self, n):
        if n not in self._rank:
            self._rank[n] = rank(self.d(n)) if n in self._d else 0
        return self._rank[n]

    def verify(self):
        for n in self.degrees():
            if n in self._d and (n + self.degree) in self._d:
                if not (self._d[n + self.degree] @ self._d[n]).is_zero():
                    raise ComplexError("%s: d o d != 0 starting in degree %d" % (self.name, n))
        return True

    def homology_dim(self, n):
        if not self.in_range(n):
            raise DegreeError("degree %d outside [%d, %d]" % (n, self.lo, self.hi))
        return self.dim(n) - self.rank_d(n) - self.rank_d(n - self.degree)

    def homology_dims(self):
        return {n: self.homology_dim(n) for n in self.degrees()}

    def euler_characteristic(self):
        return sum((-1) ** n * self.dim(n) for n in self.degrees())

    def homology_euler_characteristic(self):
        return sum((-1) ** n * h for n, h in self.homology_dims().items())

    def is_cycle(self, n, vec):
        return not any(self.d(n) @ tuple(vec))

    def boundary_preimage(self, n, vec):
        """Some x with ``d x = vec`` in degree n, or None."""
        src = n - self.degree
        return solve_in_image(self.d(src), vec)

    def is_boundary(self, n, vec):
        if not any(vec):
            return True
        return self.boundary_preimage(n, vec) is not None

    def dual(self):
        """Degreewise dual complex with transposed differentials."""
        diffs = {n + self.degree: m.T for n, m in self._d.items()}
        return ChainComplex(self.dims, diffs, self.lo, -self.degree, name=self.name + "*", check=False)

    def to_tree(self):
        return {
            "name": self.name,
            "lo": self.lo,
            "degree": self.degree,
            "dims": self.dims,
            "differentials": {str(n): m.to_tree() for n, m in sorted(self._d.items())},
        }

    def __repr__(self):
        return "ChainComplex(%r, lo=%d, dims=%s, degree=%+d)" % (self.name, self.lo, self.dims, self.degree)


def homology_dim(c, n):
    return c.homology_dim(n)


class Bicomplex:
    """Finite grid of spaces with horizontal and vertical differentials.

    ``horizontal[(p, q)]`` goes to ``(p + degree, q)`` and
    ``vertical[(p, q)]`` to ``(p, q + degree)``.  With
    ``convention="commuting"`` the raw squares commute and totalisation
    multiplies the vertical map on column p by ``(-1)**p``; with
    ``"anticommuting"`` the maps are used as given.
    """

    def __init__(self, cells, horizontal, vertical, degree=-1, convention="commuting", name=None):
        if convention not in ("commuting", "anticommuting"):
            raise ValueError("convention must be 'commuting' or 'anticommuting'")
        self.cells = dict(cells)
        self.degree = degree
        self.convention = convention
        self.name = name or "B"
        self.horizontal = {}
        self.vertical = {}
        for store, maps, step in ((self.horizontal, horizontal, (degree, 0)),
                                  (self.vertical, vertical, (0, degree))):
            for (p, q), m in maps.items():
                tgt = (p + step[0], q + step[1])
                if (p, q) not in self.cells or tgt not in self.cells:
                    if m.nnz:
                        raise ComplexError("map from %s leaves the grid" % ((p, q),))
                    continue
                if m.shape != (self.cells[tgt], self.cells[(p, q)]):
                    raise ValueError("map at %s has shape %s" % ((p, q), m.shape))
                store[(p, q)] = m
        self.verify()

    def _h(self, p, q):
        return self.horizontal.get((p, q))

    def _v(self, p, q):
        return self.vertical.get((p, q))

    def verify(self):
        e = self.degree
        for (p, q) in self.cells:
            h1, h2 = self._h(p, q), self._h(p + e, q)
            if h1 is not None and h2 is not None and not (h2 @ h1).is_zero():
                raise ComplexError("%s: row %d is not a complex at column %d" % (self.name, q, p))
            v1, v2 = self._v(p, q), self._v(p, q + e)
            if v1 is not None and v2 is not None and not (v2 @ v1).is_zero():
                raise ComplexError("%s: column %d is not a complex at row %d" % (self.name, p, q))
            if (p + e, q + e) in self.cells:
                hv = self._h(p, q + e), self._v(p, q)
                vh = self._v(p + e, q), self._h(p, q)
                a = hv[0] @ hv[1] if None not in hv else None
                b = vh[0] @ vh[1] if None not in vh else None
                a = a if a is not None else SparseMatrix.zeros(self.cells[(p + e, q + e)], self.cells[(p, q)])
                b = b if b is not None else SparseMatrix.zeros(self.cells[(p + e, q + e)], self.cells[(p, q)])
                ok = a == b if self.convention == "commuting" else (a + b).is_zero()
                if not ok:
                    raise ComplexError("%s: square at %s does not %s" % (self.name, (p, q), self.convention[:-3]))
        return True

    def total_degrees(self):
        tot = sorted({p + q for p, q in self.cells})
        return range(tot[0], tot[-1] + 1) if tot else range(0)

    def cells_in_degree(self, m):
        return sorted((p, q) for p, q in self.cells if p + q == m)

    def dual(self):
        """Transpose every map; a chain bicomplex becomes a cochain bicomplex."""
        e = self.degree
        h = {(p + e, q): m.T for (p, q), m in self.horizontal.items()}
        v = {(p, q + e): m.T for (p, q), m in self.vertical.items()}
        return Bicomplex(self.cells, h, v, -e, self.convention, name=self.name + "*")

    def to_tree(self):
        key = lambda pq: "%d,%d" % pq
        return {
            "name": self.name, "degree": self.degree, "convention": self.convention,
            "cells": {key(c): d for c, d in sorted(self.cells.items())},
            "horizontal": {key(c): m.to_tree() for c, m in sorted(self.horizontal.items())},
            "vertical": {key(c): m.to_tree() for c, m in sorted(self.vertical.items())},
        }


def total_complex(b):
    """Total complex; ``offsets[m][(p, q)]`` locates each cell inside degree m."""
    degs = b.total_degrees()
    if not len(degs):
        c = ChainComplex([], {}, 0, b.degree, name="Tot " + b.name)
        c.offsets = {}
        return c
    e = b.degree
    cells = {m: b.cells_in_degree(m) for m in degs}
    offsets = {}
    dims = []
    for m in degs:
        off, pos = {}, 0
        for c in cells[m]:
            off[c] = pos
            pos += b.cells[c]
        offsets[m] = off
        dims.append(pos)
    diffs = {}
    for m in degs:
        tgt = m + e
        if tgt not in offsets:
            continue
        src_cells, tgt_cells = cells[m], cells[tgt]
        grid = [[None] * len(src_cells) for _ in tgt_cells]
        tindex = {c: i for i, c in enumerate(tgt_cells)}
        for j, (p, q) in enumerate(src_cells):
            h = b.horizontal.get((p, q))
            if h is not None:
                grid[tindex[(p + e, q)]][j] = h
            v = b.vertical.get((p, q))
            if v is not None:
                if b.convention == "commuting" and p % 2:
                    v = -v
                grid[tindex[(p, q + e)]][j] = v
        diffs[m] = block_sized(grid, [b.cells[c] for c in tgt_cells], [b.cells[c] for c in src_cells])
    try:
        c = ChainComplex(dims, diffs, degs[0], e, name="Tot " + b.name)
    except ComplexError as exc:
        raise ComplexError("total complex of %s: %s" % (b.name, exc)) from None
    c.offsets = offsets
    return c


class ChainMap:
    """Degreewise matrices ``source_n -> target_n`` (missing degrees are zero)."""

    def __init__(self, source, target, maps, name=None, check=True):
        if source.degree != target.degree:
            raise ValueError("source and target have different differential degrees")
        self.source = source
        self.target = target
        self.name = name or "f"
        self.maps = {}
        for n, m in maps.items():
            if m.shape != (target.dim(n), source.dim(n)):
                raise ValueError("map in degree %d has shape %s" % (n, m.shape))
            self.maps[n] = m
        if check:
            self.verify()

    def at(self, n):
        m = self.maps.get(n)
        if m is None:
            return SparseMatrix.zeros(self.target.dim(n), self.source.dim(n))
        return m

    def verify(self):
        e = self.source.degree
        lo = min(self.source.lo, self.target.lo)
        hi = max(self.source.hi, self.target.hi)
        for n in range(lo, hi + 1):
            if self.target.d(n) @ self.at(n) != self.at(n + e) @ self.source.d(n):
                raise ComplexError("%s does not commute with the differentials in degree %d" % (self.name, n))
        return True


def mapping_cone(f):
    """``Cone_n = X_{n+e} (+) Y_n`` with ``d(x, y) = (-dx, f x + dy)``, e the differential degree."""
    f.verify()
    X, Y = f.source, f.target
    e = X.degree
    lo = min(X.lo - e, Y.lo)
    hi = max(X.hi - e, Y.hi)
    degs = range(lo, hi + 1)
    dims = [X.dim(n + e) + Y.dim(n) for n in degs]
    diffs = {}
    for n in degs:
        t = n + e
        if not lo <= t <= hi:
            continue
        grid = [[-X.d(n + e), None], [f.at(n + e), Y.d(n)]]
        diffs[n] = block_sized(grid, [X.dim(t + e), Y.dim(t)], [X.dim(n + e), Y.dim(n)])
    return ChainComplex(dims, diffs, lo, e, name="Cone(%s)" % f.name)


def is_quasi_iso(f, truncated=False):
    """True iff the cone is acyclic; ``truncated`` ignores the top two cone degrees."""
    cone = mapping_cone(f)
    degs = list(cone.degrees())
    if truncated:
        degs = degs[:-2]
    return all(cone.homology_dim(n) == 0 for n in degs)
