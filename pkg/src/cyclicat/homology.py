"""Hochschild and cyclic (co)homology of truncated (co)cyclic modules.

Three models of cyclic homology are built from the same module:

* ``connes``: the quotient of the Hochschild complex by the coinvariants of
  the signed cyclic operator (cyclic modules), or the invariant subcomplex
  (cocyclic modules);
* ``bicomplex``: the first-quadrant cyclic bicomplex with columns b, b' and
  rows 1 - t, N;
* ``mixed``: the normalized (b, B) bicomplex.

Cocyclic modules go through the dual cyclic module for the two bicomplex
models, which gives the transposed cochain bicomplex.  A truncation N leaves
degrees ``0 .. N-1`` exact in every model (each total degree only uses
cells of degree at most one higher), which is the safe window ``hc``
enforces.
"""
from dataclasses import dataclass, field

from cyclicat.complexes import Bicomplex, ChainComplex, ChainMap, ComplexError, is_quasi_iso, total_complex
from cyclicat.exactlin import SparseMatrix, Subspace, block_sized, hstack, kernel_basis, solve_in_image
from cyclicat.lambda_cat import Generator

__all__ = [
    "METHODS", "CONVENTIONS", "WindowError", "DescentError", "HomologyRequest",
    "signed_tau", "norm_operator", "hochschild_boundary", "hochschild_complex",
    "LambdaModel", "lambda_model", "connes_complex", "cyclic_bicomplex",
    "mixed_complex_bB", "normalized_operators", "safe_window", "hc", "hh",
    "comparison_map", "sbi_audit", "CocycleClass", "lambda_cocycle",
    "periodicity_S", "class_equal",
]

METHODS = ("connes", "bicomplex", "mixed")

CONVENTIONS = {
    "signed_cyclic_operator": "(-1)^n t_n in degree n",
    "hochschild": "b = sum_j (-1)^j d_j over all faces; b' omits the last face",
    "bicomplex": "columns b (even p) and b' (odd p); rows 1 - t (odd p) and N (even p > 0); "
                 "vertical maps on column p get the sign (-1)^p at totalisation",
    "mixed": "normalized by the images of the degeneracies; B = (1 - t) s N with the extra degeneracy s = t s_n",
    "safe_window": "degrees 0 .. N-1 for a truncation N, in every model",
}


class WindowError(ValueError):
    """A requested degree lies outside the model's safe window."""


class DescentError(ComplexError):
    def __init__(self, degree, message):
        self.degree = degree
        super().__init__(message)


def signed_tau(X, n):
    t = X.generator(Generator("t", n, 1 if n else 0))
    return -t if n % 2 else t


def norm_operator(X, n):
    t = signed_tau(X, n)
    acc = SparseMatrix.identity(X.dims[n])
    power = acc
    for _ in range(n):
        power = t @ power
        acc = acc + power
    return acc


def hochschild_boundary(X, n, prime=False):
    """Alternating face sum leaving degree n (into n-1 for cyclic, n+1 for cocyclic)."""
    if X.variance == "cyclic":
        level, count = n - 1, n + 1
    else:
        level, count = n, n + 2
    if prime:
        count -= 1
    acc = None
    for j in range(count):
        m = X.generator(Generator("d", level, j))
        m = -m if j % 2 else m
        acc = m if acc is None else acc + m
    if acc is None:
        shape = (X.dims[n - 1], X.dims[n]) if X.variance == "cyclic" else (X.dims[n + 1], X.dims[n])
        acc = SparseMatrix.zeros(*shape)
    return acc


def _diffs(X, prime=False):
    if X.variance == "cyclic":
        return {n: hochschild_boundary(X, n, prime) for n in range(1, X.N + 1)}
    return {n: hochschild_boundary(X, n, prime) for n in range(X.N)}


def hochschild_complex(X):
    deg = -1 if X.variance == "cyclic" else 1
    return ChainComplex(X.dims, _diffs(X), 0, deg, name="CH(%s)" % X.name)


class LambdaModel:
    """Connes' complex together with the maps relating it to the Hochschild complex.

    For a cyclic module ``proj[n]`` maps ``X_n`` onto the coinvariants; for a
    cocyclic module ``incl[n]`` embeds the invariants into ``X_n``.
    """

    def __init__(self, X):
        self.module = X
        self.variance = X.variance
        self.hochschild = hochschild_complex(X)
        H = self.hochschild
        self.subspaces = []
        dims = []
        for n in range(X.N + 1):
            one_minus = SparseMatrix.identity(X.dims[n]) - signed_tau(X, n)
            if self.variance == "cyclic":
                sub = Subspace.image(one_minus)
                dims.append(len(sub.complement))
            else:
                sub = Subspace.kernel(one_minus)
                dims.append(sub.dim)
            self.subspaces.append(sub)
        diffs = {}
        if self.variance == "cyclic":
            self.proj = [sub.quotient_matrix(SparseMatrix.identity(X.dims[n]))
                         for n, sub in enumerate(self.subspaces)]
            for n in range(1, X.N + 1):
                b = H.d(n)
                src, tgt = self.subspaces[n], self.subspaces[n - 1]
                if not tgt.contains_columns(b @ src.basis_matrix()):
                    raise DescentError(n, "b does not preserve the coinvariant relations in degree %d" % n)
                diffs[n] = tgt.quotient_matrix(b @ src.section())
            name = "CC^lambda(%s)" % X.name
        else:
            self.incl = [sub.basis_matrix() for sub in self.subspaces]
            for n in range(X.N):
                b = H.d(n)
                src, tgt = self.subspaces[n], self.subspaces[n + 1]
                if not tgt.contains_columns(b @ src.basis_matrix()):
                    raise DescentError(n, "b does not preserve the cyclic invariants in degree %d" % n)
                diffs[n] = src.restriction_matrix(b, tgt)
            name = "C_lambda(%s)" % X.name
        deg = -1 if self.variance == "cyclic" else 1
        self.complex = ChainComplex(dims, diffs, 0, deg, name=name)

    def class_equal(self, p, v1, v2):
        """For a cocyclic module: do two closed invariant cochains differ by a coboundary?"""
        if self.variance != "cocyclic":
            raise ValueError("class comparison is implemented for cochains")
        for v in (v1, v2):
            if p < self.module.N and any(self.hochschild.d(p) @ tuple(v)):
                raise ValueError("input cochain is not closed")
            if not self.subspaces[p].contains(v):
                raise ValueError("input cochain is not cyclically invariant")
        diff = tuple(a - b for a, b in zip(v1, v2))
        if not any(diff):
            return True
        if p == 0:
            return False
        img = self.hochschild.d(p - 1) @ self.incl[p - 1]
        return solve_in_image(img, diff) is not None


def lambda_model(X):
    return LambdaModel(X)


def connes_complex(X):
    return lambda_model(X).complex


def _cyclic_bicomplex_chain(X):
    N = X.N
    b = _diffs(X)
    bp = _diffs(X, prime=True)
    cells = {(p, q): X.dims[q] for p in range(N + 1) for q in range(N + 1 - p)}
    vert, hor = {}, {}
    for (p, q) in cells:
        if q >= 1:
            vert[(p, q)] = b[q] if p % 2 == 0 else bp[q]
        if p >= 1:
            one = SparseMatrix.identity(X.dims[q])
            hor[(p, q)] = one - signed_tau(X, q) if p % 2 else norm_operator(X, q)
    return Bicomplex(cells, hor, vert, -1, "commuting", name="CC(%s)" % X.name)


def cyclic_bicomplex(X):
    """Cyclic bicomplex on the triangle p + q <= N (cochain version for cocyclic X)."""
    if X.variance == "cyclic":
        return _cyclic_bicomplex_chain(X)
    B = _cyclic_bicomplex_chain(X.dual()).dual()
    B.name = "CC(%s)" % X.name
    return B


def normalized_operators(X):
    """Normalized spaces and the maps b, B on them for a cyclic module.

    Returns ``(subspaces, b, B)`` where ``subspaces[n]`` is the degenerate
    part of ``X_n``, ``b[n]`` goes from degree n to n-1 and ``B[n]`` from n
    to n+1, both in quotient coordinates.
    """
    N = X.N
    degen = [Subspace(X.dims[0])]
    for n in range(1, N + 1):
        degen.append(Subspace.image(hstack([X.generator(Generator("s", n - 1, i)) for i in range(n)])))
    hb = _diffs(X)
    bbar, Bbar = {}, {}
    for n in range(1, N + 1):
        bbar[n] = degen[n - 1].quotient_matrix(hb[n] @ degen[n].section())
    for n in range(N):
        extra = X.generator(Generator("t", n + 1, 1)) @ X.generator(Generator("s", n, n))
        full = (SparseMatrix.identity(X.dims[n + 1]) - signed_tau(X, n + 1)) @ extra @ norm_operator(X, n)
        if not degen[n + 1].contains_columns(full @ degen[n].basis_matrix()):
            raise DescentError(n, "B does not preserve degenerate elements in degree %d" % n)
        Bbar[n] = degen[n + 1].quotient_matrix(full @ degen[n].section())
    return degen, bbar, Bbar


def _mixed_chain(X):
    N = X.N
    degen, bbar, Bbar = normalized_operators(X)
    dims = [len(s.complement) for s in degen]
    cells = {(p, q): dims[q - p] for p in range(N + 1) for q in range(p, N + 1 - p)}
    vert, hor = {}, {}
    for (p, q) in cells:
        n = q - p
        if n >= 1:
            vert[(p, q)] = -bbar[n] if p % 2 else bbar[n]
        if p >= 1:
            hor[(p, q)] = Bbar[n]
    B = Bicomplex(cells, hor, vert, -1, "commuting", name="B(%s)" % X.name)
    B.normalized_dims = dims
    return B


def mixed_complex_bB(X):
    """Normalized (b, B) bicomplex; cell (p, q) holds the normalized degree q - p."""
    if X.variance == "cyclic":
        return _mixed_chain(X)
    B = _mixed_chain(X.dual()).dual()
    B.name = "B(%s)" % X.name
    return B


def safe_window(method, N):
    if method not in METHODS:
        raise ValueError("unknown method %r (choose from %s)" % (method, ", ".join(METHODS)))
    return range(0, N)


@dataclass
class HomologyRequest:
    module: object
    method: str = "connes"
    degrees: list = field(default_factory=list)


def _model_complex(X, method):
    if method == "connes":
        return connes_complex(X)
    if method == "bicomplex":
        return total_complex(cyclic_bicomplex(X))
    return total_complex(mixed_complex_bB(X))


def hc(X, method="connes", degrees=None):
    """Cyclic homology (cyclic X) or cohomology (cocyclic X) dimensions by degree."""
    if isinstance(X, HomologyRequest):
        X, method, degrees = X.module, X.method, (X.degrees or None)
    window = safe_window(method, X.N)
    degrees = list(window) if degrees is None else list(degrees)
    bad = [n for n in degrees if n not in window]
    if bad:
        raise WindowError("degrees %s lie outside the safe window %d..%d of method %r at truncation %d"
                          % (bad, window.start, window.stop - 1, method, X.N))
    C = _model_complex(X, method)
    return {n: C.homology_dim(n) for n in degrees}


def hh(X, degrees=None):
    window = range(0, X.N)
    degrees = list(window) if degrees is None else list(degrees)
    bad = [n for n in degrees if n not in window]
    if bad:
        raise WindowError("degrees %s lie outside the safe window 0..%d" % (bad, X.N - 1))
    C = hochschild_complex(X)
    return {n: C.homology_dim(n) for n in degrees}


def comparison_map(X, model=None):
    """Chain map between the bicomplex total complex and Connes' complex.

    Cyclic X: column 0 projected onto the coinvariants, ``Tot -> lambda``.
    Cocyclic X: the invariants placed in column 0, ``lambda -> Tot``.
    """
    model = model or lambda_model(X)
    tot = total_complex(cyclic_bicomplex(X))
    lam = model.complex
    maps = {}
    for m in range(X.N + 1):
        widths = [X.dims[q] for (_, q) in sorted(tot.offsets[m])]
        if X.variance == "cyclic":
            grid = [[model.proj[m]] + [None] * (len(widths) - 1)]
            maps[m] = block_sized(grid, [lam.dim(m)], widths)
        else:
            grid = [[model.incl[m]]] + [[None] for _ in widths[1:]]
            maps[m] = block_sized(grid, widths, [lam.dim(m)])
    if X.variance == "cyclic":
        return ChainMap(tot, lam, maps, name="Tot CC -> C^lambda")
    return ChainMap(lam, tot, maps, name="C_lambda -> Tot CC")


def sbi_audit(X):
    """Check ``HC_n - HC_{n-2} = rank I_n + rank I_{n-1} - HH_{n-1}`` in the safe window.

    ``I: HH -> HC`` is computed explicitly from the projection onto the
    coinvariants.  Returns one row per degree.
    """
    if X.variance != "cyclic":
        X = X.dual()
    model = lambda_model(X)
    H, L = model.hochschild, model.complex
    N = X.N
    hhd = {n: H.homology_dim(n) for n in range(N)}
    hcd = {n: L.homology_dim(n) for n in range(N)}
    rank_I = {}
    for n in range(N):
        cycles = kernel_basis(H.d(n)) if n else [tuple(c) for c in SparseMatrix.identity(X.dims[0]).columns()]
        bounds = list(L.d(n + 1).columns())
        base = Subspace(L.dim(n), bounds).dim
        images = [model.proj[n] @ z for z in cycles]
        rank_I[n] = Subspace(L.dim(n), bounds + images).dim - base
    rows = []
    for n in range(N):
        lhs = hcd[n] - hcd.get(n - 2, 0)
        rhs = rank_I[n] + rank_I.get(n - 1, 0) - hhd.get(n - 1, 0)
        rows.append({"degree": n, "HH": hhd[n], "HC": hcd[n], "rank_I": rank_I[n],
                     "lhs": lhs, "rhs": rhs, "ok": lhs == rhs})
    return rows


@dataclass
class CocycleClass:
    degree: int
    vector: tuple
    model: str = "lambda"
    certificate: dict = field(default_factory=dict)


def lambda_cocycle(model, p, vector):
    """Gate a vector of a cocyclic module as a closed invariant cochain."""
    X = model.module
    vector = tuple(vector)
    if len(vector) != X.dims[p]:
        raise ValueError("cochain has length %d, degree %d has dimension %d" % (len(vector), p, X.dims[p]))
    if not model.subspaces[p].contains(vector):
        raise ValueError("cochain is not invariant under the signed cyclic operator")
    if p >= X.N:
        raise WindowError("closure in degree %d needs truncation at least %d" % (p, p + 1))
    if any(model.hochschild.d(p) @ vector):
        raise ValueError("cochain is not closed")
    return CocycleClass(p, vector, "lambda", {"closed": True, "invariant": True})


def periodicity_S(c, model, steps=1, tot=None):
    """Shift a lambda cocycle two columns per step in the cyclic bicomplex and pull it back.

    ``model`` is the :class:`LambdaModel` of a cocyclic module.  Needs a
    truncation of at least ``degree + 2*steps + 1``.
    """
    X = model.module
    if X.variance != "cocyclic":
        raise ValueError("the periodicity operator acts on cochains of a cocyclic module")
    p = c.degree
    shift = 2 * steps
    target = p + shift
    if target + 1 > X.N:
        raise WindowError("S^%d in degree %d needs truncation at least %d (have %d)"
                          % (steps, p, target + 1, X.N))
    c = lambda_cocycle(model, p, c.vector)
    tot = tot or total_complex(cyclic_bicomplex(X))
    z = [0] * tot.dim(target)
    off = tot.offsets[target][(shift, p)]
    for i, v in enumerate(c.vector):
        z[off + i] = v
    z = tuple(z)
    if any(tot.d(target) @ z):
        raise ComplexError("shifted cochain is not closed in the total complex")
    incl = comparison_map(X, model).at(target)
    system = hstack([incl, tot.d(target - 1)])
    sol = solve_in_image(system, z)
    if sol is None:
        raise ComplexError("shifted class has no representative in the invariant subcomplex")
    k = model.complex.dim(target)
    coords = sol[:k]
    vec = model.incl[target] @ tuple(coords)
    out = lambda_cocycle(model, target, vec)
    out.certificate.update({"S_steps": steps, "source_degree": p})
    return out


def class_equal(model, c1, c2):
    if c1.degree != c2.degree:
        raise ValueError("degree mismatch: %d vs %d" % (c1.degree, c2.degree))
    return model.class_equal(c1.degree, c1.vector, c2.vector)
