"""Exact sparse linear algebra over the rationals.

Matrices keep their nonzero entries as ``fractions.Fraction`` in a
dict-of-rows.  Rank, kernels, image membership and quotient coordinates go
through the fraction-free integer elimination kernel, compiled when the
``_elim`` extension is built and pure Python otherwise.  Set
``CYCLICAT_PURE_PYTHON=1`` to force the fallback.
"""
import os
from fractions import Fraction
from math import lcm

if os.environ.get("CYCLICAT_PURE_PYTHON"):
    from cyclicat import _elim_py as _kernel
else:
    try:
        from cyclicat import _elim as _kernel
    except ImportError:  # extension not built
        from cyclicat import _elim_py as _kernel

KERNEL = "compiled" if _kernel.__name__.endswith("._elim") else "python"

__all__ = [
    "KERNEL", "BudgetExceeded", "Scalar", "Q", "fstr", "SparseMatrix", "Subspace",
    "rank", "kernel_basis", "solve_in_image", "block", "block_sized", "hstack", "vstack",
]

Scalar = Fraction
_ZERO = Fraction(0)


class BudgetExceeded(RuntimeError):
    """A construction would exceed the configured memory budget."""


def Q(x):
    """Coerce ints, Fractions and ``"p/q"`` strings to an exact Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted: %r" % (x,))
    return Fraction(x)


def fstr(x):
    x = Q(x)
    if x.denominator == 1:
        return str(x.numerator)
    return "%d/%d" % (x.numerator, x.denominator)


class SparseMatrix:
    """An exact rational matrix; stored entries are never zero.

    Instances are treated as immutable once built.
    """

    __slots__ = ("nrows", "ncols", "_rows")

    def __init__(self, nrows, ncols, entries=None):
        if nrows < 0 or ncols < 0:
            raise ValueError("negative shape")
        self.nrows = nrows
        self.ncols = ncols
        rows = {}
        if entries:
            items = entries.items() if isinstance(entries, dict) else entries
            for (r, c), v in items:
                if not (0 <= r < nrows and 0 <= c < ncols):
                    raise IndexError("entry (%d, %d) outside %dx%d" % (r, c, nrows, ncols))
                v = Q(v)
                if v:
                    row = rows.setdefault(r, {})
                    w = row.get(c, _ZERO) + v
                    if w:
                        row[c] = w
                    else:
                        del row[c]
                        if not row:
                            del rows[r]
        self._rows = rows

    @classmethod
    def _from_rows(cls, nrows, ncols, rows):
        m = cls.__new__(cls)
        m.nrows = nrows
        m.ncols = ncols
        m._rows = rows
        return m

    @classmethod
    def from_dense(cls, data, ncols=None):
        data = [list(r) for r in data]
        if ncols is None:
            ncols = len(data[0]) if data else 0
        rows = {}
        for i, r in enumerate(data):
            if len(r) != ncols:
                raise ValueError("ragged dense matrix")
            row = {j: Q(v) for j, v in enumerate(r) if v}
            if row:
                rows[i] = row
        return cls._from_rows(len(data), ncols, rows)

    @classmethod
    def identity(cls, n):
        return cls._from_rows(n, n, {i: {i: Fraction(1)} for i in range(n)})

    @classmethod
    def zeros(cls, nrows, ncols):
        return cls._from_rows(nrows, ncols, {})

    @classmethod
    def from_columns(cls, nrows, columns):
        rows = {}
        for j, col in enumerate(columns):
            if len(col) != nrows:
                raise ValueError("column %d has length %d, expected %d" % (j, len(col), nrows))
            for i, v in enumerate(col):
                if v:
                    rows.setdefault(i, {})[j] = Q(v)
        return cls._from_rows(nrows, len(columns), rows)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, key):
        r, c = key
        return self._rows.get(r, {}).get(c, _ZERO)

    def entries(self):
        for r in sorted(self._rows):
            row = self._rows[r]
            for c in sorted(row):
                yield (r, c), row[c]

    def row_dict(self, r):
        return self._rows.get(r, {})

    @property
    def nnz(self):
        return sum(len(r) for r in self._rows.values())

    def is_zero(self):
        return not self._rows

    def to_dense(self):
        out = [[_ZERO] * self.ncols for _ in range(self.nrows)]
        for r, row in self._rows.items():
            for c, v in row.items():
                out[r][c] = v
        return out

    def column(self, j):
        return tuple(self._rows.get(i, {}).get(j, _ZERO) for i in range(self.nrows))

    def columns(self):
        cols = [[_ZERO] * self.nrows for _ in range(self.ncols)]
        for r, row in self._rows.items():
            for c, v in row.items():
                cols[c][r] = v
        return [tuple(c) for c in cols]

    @property
    def T(self):
        rows = {}
        for r, row in self._rows.items():
            for c, v in row.items():
                rows.setdefault(c, {})[r] = v
        return SparseMatrix._from_rows(self.ncols, self.nrows, rows)

    def transpose(self):
        return self.T

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    __hash__ = None

    def __repr__(self):
        return "SparseMatrix(%d, %d, nnz=%d)" % (self.nrows, self.ncols, self.nnz)

    def __str__(self):
        lines = []
        for row in self.to_dense():
            lines.append("[" + " ".join(fstr(v).rjust(4) for v in row) + "]")
        return "\n".join(lines)

    def _combine(self, other, sign):
        if self.shape != other.shape:
            raise ValueError("shape mismatch %s vs %s" % (self.shape, other.shape))
        rows = {r: dict(row) for r, row in self._rows.items()}
        for r, orow in other._rows.items():
            row = rows.setdefault(r, {})
            for c, v in orow.items():
                w = row.get(c, _ZERO) + sign * v
                if w:
                    row[c] = w
                else:
                    del row[c]
            if not row:
                del rows[r]
        return SparseMatrix._from_rows(self.nrows, self.ncols, rows)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, k):
        k = Q(k)
        if not k:
            return SparseMatrix.zeros(self.nrows, self.ncols)
        rows = {r: {c: k * v for c, v in row.items()} for r, row in self._rows.items()}
        return SparseMatrix._from_rows(self.nrows, self.ncols, rows)

    def __mul__(self, k):
        if isinstance(k, SparseMatrix):
            raise TypeError("use @ for matrix products")
        return self.scale(k)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, SparseMatrix):
            if self.ncols != other.nrows:
                raise ValueError("cannot multiply %s by %s" % (self.shape, other.shape))
            orows = other._rows
            rows = {}
            for r, row in self._rows.items():
                acc = {}
                for k, v in row.items():
                    orow = orows.get(k)
                    if orow is None:
                        continue
                    for c, w in orow.items():
                        acc[c] = acc.get(c, _ZERO) + v * w
                acc = {c: v for c, v in acc.items() if v}
                if acc:
                    rows[r] = acc
            return SparseMatrix._from_rows(self.nrows, other.ncols, rows)
        vec = tuple(other)
        if len(vec) != self.ncols:
            raise ValueError("vector length %d, expected %d" % (len(vec), self.ncols))
        out = [_ZERO] * self.nrows
        for r, row in self._rows.items():
            s = _ZERO
            for c, v in row.items():
                x = vec[c]
                if x:
                    s += v * x
            out[r] = s
        return tuple(out)

    def rmul_vector(self, vec):
        """Row vector times matrix: ``vec @ self``."""
        vec = tuple(vec)
        if len(vec) != self.nrows:
            raise ValueError("vector length %d, expected %d" % (len(vec), self.nrows))
        out = [_ZERO] * self.ncols
        for r, row in self._rows.items():
            x = vec[r]
            if x:
                for c, v in row.items():
                    out[c] += x * v
        return tuple(out)

    def __pow__(self, k):
        if self.nrows != self.ncols or k < 0:
            raise ValueError("matrix power needs a square matrix and k >= 0")
        out = SparseMatrix.identity(self.nrows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def kron(self, other):
        """Kronecker product, row-major index ``i*other.nrows + k``."""
        rows = {}
        on, oc = other.nrows, other.ncols
        for r, row in self._rows.items():
            for r2, row2 in other._rows.items():
                acc = {}
                for c, v in row.items():
                    base = c * oc
                    for c2, w in row2.items():
                        acc[base + c2] = v * w
                rows[r * on + r2] = acc
        return SparseMatrix._from_rows(self.nrows * on, self.ncols * oc, rows)

    def to_tree(self):
        """JSON-ready dict with entries as ``[row, col, "p/q"]``."""
        return {"shape": [self.nrows, self.ncols],
                "entries": [[r, c, fstr(v)] for (r, c), v in self.entries()]}

    @classmethod
    def from_tree(cls, tree):
        nrows, ncols = tree["shape"]
        return cls(nrows, ncols, {(r, c): Q(v) for r, c, v in tree.get("entries", ())})

    def select_columns(self, cols):
        index = {c: j for j, c in enumerate(cols)}
        rows = {}
        for r, row in self._rows.items():
            new = {index[c]: v for c, v in row.items() if c in index}
            if new:
                rows[r] = new
        return SparseMatrix._from_rows(self.nrows, len(cols), rows)

    def integer_rows(self):
        """Rows scaled to primitive-free integer dicts (denominators cleared)."""
        out = []
        for r in range(self.nrows):
            row = self._rows.get(r)
            out.append(_int_row(row) if row else {})
        return out


def _int_row(row):
    den = 1
    for v in row.values():
        if v.denominator != 1:
            den = lcm(den, v.denominator)
    if den == 1:
        return {c: v.numerator for c, v in row.items()}
    return {c: (v * den).numerator for c, v in row.items()}


def _vec_row(vec):
    return {i: Q(v) for i, v in enumerate(vec) if v}


def block(blocks):
    """Assemble a block matrix from a grid of SparseMatrix (None = zero block).

    Every block row needs one matrix fixing its height, and every block
    column one matrix fixing its width.
    """
    nbr = len(blocks)
    nbc = len(blocks[0]) if nbr else 0
    heights = [None] * nbr
    widths = [None] * nbc
    for i, brow in enumerate(blocks):
        if len(brow) != nbc:
            raise ValueError("ragged block grid")
        for j, b in enumerate(brow):
            if b is None:
                continue
            if heights[i] is None:
                heights[i] = b.nrows
            elif heights[i] != b.nrows:
                raise ValueError("block row %d height mismatch" % i)
            if widths[j] is None:
                widths[j] = b.ncols
            elif widths[j] != b.ncols:
                raise ValueError("block column %d width mismatch" % j)
    if None in heights or None in widths:
        raise ValueError("cannot infer block sizes; pass explicit zero blocks")
    return _assemble(blocks, heights, widths)


def block_sized(blocks, heights, widths):
    """Like :func:`block` with explicit block heights and widths."""
    if len(blocks) != len(heights) or any(len(r) != len(widths) for r in blocks):
        raise ValueError("block grid does not match the given sizes")
    for i, brow in enumerate(blocks):
        for j, b in enumerate(brow):
            if b is not None and b.shape != (heights[i], widths[j]):
                raise ValueError("block (%d, %d) has shape %s, expected %s"
                                 % (i, j, b.shape, (heights[i], widths[j])))
    return _assemble(blocks, heights, widths)


def _assemble(blocks, heights, widths):
    roff = [0]
    for h in heights:
        roff.append(roff[-1] + h)
    coff = [0]
    for w in widths:
        coff.append(coff[-1] + w)
    rows = {}
    for i, brow in enumerate(blocks):
        for j, b in enumerate(brow):
            if b is None:
                continue
            for r, row in b._rows.items():
                target = rows.setdefault(roff[i] + r, {})
                for c, v in row.items():
                    target[coff[j] + c] = v
    return SparseMatrix._from_rows(roff[-1], coff[-1], rows)


def hstack(mats):
    return block([list(mats)])


def vstack(mats):
    return block([[m] for m in mats])


def rank(m):
    """Exact rank over Q."""
    pivots, _ = _kernel.echelon(m.integer_rows())
    return len(pivots)


def kernel_basis(m):
    """Basis of the null space of ``m`` as tuples of Fractions."""
    basis = []
    for row in _kernel_rows(m):
        v = [_ZERO] * m.ncols
        for c, x in row.items():
            v[c] = x
        basis.append(tuple(v))
    return basis


def solve_in_image(m, b):
    """Return some ``x`` with ``m @ x == b``, or ``None`` if ``b`` is not in the image."""
    b = tuple(Q(v) for v in b)
    if len(b) != m.nrows:
        raise ValueError("right-hand side has length %d, matrix has %d rows" % (len(b), m.nrows))
    n = m.ncols
    rows = []
    for r in range(m.nrows):
        row = dict(m.row_dict(r))
        if b[r]:
            row[n] = b[r]
        rows.append(_int_row(row) if row else {})
    pivots, table = _kernel.echelon(rows)
    if pivots and pivots[-1] == n:
        return None
    red = _kernel.rref(pivots, table)
    x = [_ZERO] * n
    for p in pivots:
        row = red[p]
        rhs = row.get(n)
        if rhs:
            x[p] = Fraction(rhs, row[p])
    return tuple(x)


def _int_row_den(row):
    """Integer row and the denominator it was scaled by."""
    den = 1
    for v in row.values():
        if v.denominator != 1:
            den = lcm(den, v.denominator)
    if den == 1:
        return {c: v.numerator for c, v in row.items()}, 1
    return {c: (v * den).numerator for c, v in row.items()}, den


def _kernel_rows(m):
    """Null space basis of ``m`` as sparse dicts of Fractions."""
    pivots, table = _kernel.echelon(m.integer_rows())
    red = _kernel.rref(pivots, table)
    pivset = set(pivots)
    # free column f -> pivots whose reduced row mentions f
    touches = {}
    for p in pivots:
        row = red[p]
        for c in row:
            if c != p:
                touches.setdefault(c, []).append(p)
    out = []
    for f in range(m.ncols):
        if f in pivset:
            continue
        v = {f: Fraction(1)}
        for p in touches.get(f, ()):
            row = red[p]
            v[p] = Fraction(-row[f], row[p])
        out.append(v)
    return out


class Subspace:
    """The span of a family of vectors in Q^n, kept in echelon form.

    ``complement`` lists the non-pivot coordinates; the standard basis
    vectors on those coordinates span a complement, which is how quotient
    spaces are coordinatised.
    """

    def __init__(self, ambient, vectors=()):
        rows = []
        for v in vectors:
            if len(v) != ambient:
                raise ValueError("vector of length %d in Q^%d" % (len(v), ambient))
            row = _vec_row(v)
            if row:
                rows.append(_int_row(row))
        self._setup(ambient, rows)

    def _setup(self, ambient, int_rows):
        self.ambient = ambient
        self._pivots, self._table = _kernel.echelon(int_rows)
        pivset = set(self._pivots)
        self.complement = [c for c in range(ambient) if c not in pivset]
        self._cindex = {c: j for j, c in enumerate(self.complement)}

    @classmethod
    def image(cls, m):
        """Column space of ``m``."""
        sub = cls.__new__(cls)
        sub._setup(m.nrows, m.T.integer_rows())
        return sub

    @classmethod
    def kernel(cls, m):
        """Null space of ``m``."""
        sub = cls.__new__(cls)
        sub._setup(m.ncols, [_int_row(r) for r in _kernel_rows(m)])
        return sub

    @property
    def dim(self):
        return len(self._pivots)

    def basis(self):
        out = []
        for p in self._pivots:
            v = [_ZERO] * self.ambient
            for c, x in self._table[p].items():
                v[c] = Fraction(x)
            out.append(tuple(v))
        return out

    def _sparse_residue(self, row):
        """Residue of a sparse Fraction row as a sparse Fraction dict."""
        if not row:
            return {}
        irow, den = _int_row_den(row)
        res, scale = _kernel.reduce_row(self._pivots, self._table, irow)
        total = scale * den
        return {c: Fraction(x, total) for c, x in res.items()}

    def residue(self, vec):
        """Representative of ``vec`` modulo the subspace, zero on pivot coordinates."""
        out = [_ZERO] * self.ambient
        for c, x in self._sparse_residue(_vec_row(vec)).items():
            out[c] = x
        return tuple(out)

    def contains(self, vec):
        return not self._sparse_residue(_vec_row(vec))

    def contains_columns(self, m):
        """True iff every column of ``m`` lies in the subspace."""
        return all(not self._sparse_residue(row) for row in m.T._rows.values())

    def quotient_coordinates(self, vec):
        res = self.residue(vec)
        return tuple(res[c] for c in self.complement)

    def quotient_matrix(self, m):
        """Matrix of ``v -> quotient_coordinates(m @ v)`` (m lands in the ambient space)."""
        rows = {}
        for j, col in m.T._rows.items():
            for c, x in self._sparse_residue(col).items():
                rows.setdefault(self._cindex[c], {})[j] = x
        return SparseMatrix._from_rows(len(self.complement), m.ncols, rows)

    def section(self):
        """Inclusion of the complement coordinates: quotient -> ambient."""
        return SparseMatrix(self.ambient, len(self.complement),
                            {(c, j): 1 for j, c in enumerate(self.complement)})

    def _reduced_rows(self):
        if not hasattr(self, "_reduced"):
            red = _kernel.rref(self._pivots, self._table)
            self._reduced = [{c: Fraction(x, red[p][p]) for c, x in red[p].items()} for p in self._pivots]
        return self._reduced

    def reduced_basis(self):
        """Basis with vector k equal to 1 on pivot k and 0 on the other pivots."""
        out = []
        for row in self._reduced_rows():
            v = [_ZERO] * self.ambient
            for c, x in row.items():
                v[c] = x
            out.append(tuple(v))
        return out

    def basis_matrix(self):
        """Columns are :meth:`reduced_basis`."""
        rows = {}
        for j, row in enumerate(self._reduced_rows()):
            for c, x in row.items():
                rows.setdefault(c, {})[j] = x
        return SparseMatrix._from_rows(self.ambient, self.dim, rows)

    def coordinates(self, vec):
        """Coefficients of ``vec`` in :meth:`reduced_basis`; raises if ``vec`` is outside."""
        vec = tuple(Q(v) for v in vec)
        if not self.contains(vec):
            raise ValueError("vector is not in the subspace")
        return tuple(vec[p] for p in self._pivots)

    def restriction_matrix(self, m, target):
        """Matrix of ``m`` restricted to this subspace, landing in subspace ``target``."""
        img = m @ self.basis_matrix()
        rows = {}
        for j, col in img.T._rows.items():
            if target._sparse_residue(col):
                raise ValueError("image leaves the target subspace")
            for k, p in enumerate(target._pivots):
                x = col.get(p)
                if x:
                    rows.setdefault(k, {})[j] = x
        return SparseMatrix._from_rows(target.dim, self.dim, rows)
