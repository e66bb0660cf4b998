"""Truncated cyclic and cocyclic modules as matrices.

A *cyclic* module is a right Λ-module (contravariant): a generator
``f: [a] -> [b]`` acts by a matrix ``X_b -> X_a`` and ``X(f g) = X(g) X(f)``.
A *cocyclic* module is a left Λ-module (covariant): ``Y(f): Y_a -> Y_b`` and
``Y(f g) = Y(f) Y(g)``.  Only the generators ``d``, ``s`` and ``t`` (power
one) are stored; everything else is composed from them.
"""
import os
from dataclasses import dataclass, field
from itertools import product

from cyclicat.exactlin import BudgetExceeded, SparseMatrix
from cyclicat.lambda_cat import Generator, compose, enumerate_basis, relation_instances

__all__ = [
    "RepresentationError", "CommutationError", "ModuleRelationReport",
    "CyclicModuleRep", "CyclicModuleMorphism", "canonical_cyclic_module",
    "coalgebra_cocyclic_module", "trivial_module", "diag_hom",
    "hopf_cyclic_rep", "phi_map", "generators", "default_budget_mb",
    "CANONICAL_CONVENTIONS", "COALGEBRA_CONVENTIONS",
]

VARIANCES = ("cyclic", "cocyclic")

CANONICAL_CONVENTIONS = {
    "faces": "d_j(a_0,...,a_{n+1}) multiplies a_j a_{j+1} for j <= n; "
             "d_{n+1} puts a_{n+1} a_0 in front",
    "degeneracies": "s_i inserts 1 after a_i",
    "cyclic": "t(a_0,...,a_n) = (a_n, a_0, ..., a_{n-1})",
}

COALGEBRA_CONVENTIONS = {
    "faces": "d_j applies the comultiplication to c_j for j <= n; "
             "d_{n+1}(c_0,...,c_n) = (c_0'', c_1, ..., c_n, c_0')",
    "degeneracies": "s_i applies the counit to c_{i+1}",
    "cyclic": "t(c_0,...,c_n) = (c_1, ..., c_n, c_0)",
}


class RepresentationError(ValueError):
    """A representation violates a relation of the cyclic category."""


class CommutationError(ValueError):
    """A degreewise map fails to commute with a generator."""

    def __init__(self, generator, message):
        self.generator = generator
        super().__init__(message)


def default_budget_mb():
    return float(os.environ.get("CYCLICAT_BUDGET_MB", "1024"))


def generators(N):
    """Stored generators whose source and target are at most N."""
    out = []
    for n in range(N):
        out += [Generator("d", n, j) for j in range(n + 2)]
        out += [Generator("s", n, i) for i in range(n + 1)]
    out += [Generator("t", n, 1) for n in range(1, N + 1)]
    return out


def _key(g):
    return (g.kind, g.level, g.index)


@dataclass
class ModuleRelationReport:
    checked: int = 0
    skipped: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def summary(self):
        lines = ["%d relation instances checked, %d skipped at the truncation boundary, %d violations"
                 % (self.checked, self.skipped, len(self.violations))]
        lines += ["  VIOLATION %s" % v for v in self.violations[:20]]
        return "\n".join(lines)


class CyclicModuleRep:
    """Degreewise matrices of a truncated (co)cyclic module.

    ``ops`` maps ``(kind, level, index)`` of each stored generator to its
    matrix; ``t`` is stored with index 1 and omitted in degree 0.
    """

    def __init__(self, variance, N, dims, ops, conventions=None, name=None):
        if variance not in VARIANCES:
            raise ValueError("variance must be 'cyclic' or 'cocyclic'")
        if N < 0 or len(dims) != N + 1:
            raise ValueError("need one dimension for each degree 0..N")
        self.variance = variance
        self.N = N
        self.dims = list(dims)
        self.conventions = dict(conventions or {})
        self.name = name or "X"
        self._ops = {}
        for g in generators(N):
            k = _key(g)
            if k not in ops:
                raise ValueError("missing matrix for %s" % g)
            self._ops[k] = self._check_shape(g, ops[k])

    def _check_shape(self, g, mat):
        a, b = g.source, g.target
        want = (self.dims[a], self.dims[b]) if self.variance == "cyclic" else (self.dims[b], self.dims[a])
        if mat.shape != want:
            raise ValueError("matrix for %s has shape %s, expected %s" % (g, mat.shape, want))
        return mat

    def generator(self, g):
        if g.kind == "id":
            return SparseMatrix.identity(self.dims[g.level])
        if max(g.source, g.target) > self.N:
            raise IndexError("%s leaves the truncation N=%d" % (g, self.N))
        if g.kind == "t":
            n = g.level
            if n == 0 or g.index == 0:
                return SparseMatrix.identity(self.dims[n])
            return self._ops[("t", n, 1)] ** g.index
        return self._ops[_key(g)]

    def word_operator(self, word):
        """Matrix of a composite given as generators, leftmost acting last."""
        word = list(word)
        if not word:
            raise ValueError("empty word")
        M = SparseMatrix.identity(self.dims[word[0].target])
        for g in word:
            if self.variance == "cyclic":
                M = self.generator(g) @ M
            else:
                M = M @ self.generator(g)
        return M

    def operator(self, f):
        """Matrix of a morphism of the cyclic category."""
        word = f.word() or [Generator("id", f.source)]
        return self.word_operator(word)

    def _fits(self, word):
        return all(max(g.source, g.target) <= self.N for g in word)

    def verify(self):
        """Check every relation instance and every generator composite inside the truncation."""
        rep = ModuleRelationReport()
        for name, lhs, rhs in relation_instances(self.N):
            if not (self._fits(lhs) and self._fits(rhs)):
                rep.skipped += 1
                continue
            rep.checked += 1
            if self.word_operator(lhs) != self.word_operator(rhs):
                rep.violations.append("%s: %s != %s" % (name, " . ".join(map(str, lhs)),
                                                        " . ".join(map(str, rhs))))
        gens = generators(self.N)
        for g1 in gens:
            for g2 in gens:
                if g2.target != g1.source:
                    continue
                rep.checked += 1
                f = compose(g1.morphism(), g2.morphism())
                if self.operator(f) != self.word_operator([g1, g2]):
                    rep.violations.append("composite %s . %s != %s" % (g1, g2, f))
        return rep

    def validate(self):
        rep = self.verify()
        if not rep.ok:
            raise RepresentationError("%s: first failing relation instance %s"
                                      % (self.name, rep.violations[0]))
        return rep

    def dual(self):
        """Degreewise linear dual; a cyclic module becomes cocyclic and vice versa."""
        other = "cocyclic" if self.variance == "cyclic" else "cyclic"
        return CyclicModuleRep(other, self.N, self.dims, {k: m.T for k, m in self._ops.items()},
                               conventions={"dual of": self.name}, name=self.name + "*")

    def truncate(self, N):
        if N > self.N:
            raise ValueError("cannot extend a truncation")
        ops = {_key(g): self._ops[_key(g)] for g in generators(N)}
        return CyclicModuleRep(self.variance, N, self.dims[:N + 1], ops, self.conventions, self.name)

    def __eq__(self, other):
        return (isinstance(other, CyclicModuleRep) and self.variance == other.variance
                and self.N == other.N and self.dims == other.dims and self._ops == other._ops)

    def to_tree(self):
        return {
            "name": self.name,
            "variance": self.variance,
            "truncation": self.N,
            "dims": self.dims,
            "conventions": self.conventions,
            "operators": {str(g): self._ops[_key(g)].to_tree() for g in generators(self.N)},
        }

    @classmethod
    def from_tree(cls, tree):
        N = int(tree["truncation"])
        ops = {}
        raw = tree.get("operators", {})
        for g in generators(N):
            if str(g) not in raw:
                raise ValueError("missing operator %s" % g)
            ops[_key(g)] = SparseMatrix.from_tree(raw[str(g)])
        return cls(tree["variance"], N, tree["dims"], ops, tree.get("conventions"), tree.get("name"))

    def __repr__(self):
        return "CyclicModuleRep(%r, %s, N=%d, dims=%s)" % (self.name, self.variance, self.N, self.dims)


# -- tensor power helpers ---------------------------------------------------

def _permute_factors(d, k, perm):
    """Matrix sending ``e_{t_0} (x) ... (x) e_{t_{k-1}}`` to the tensor with ``u_i = t_{perm[i]}``."""
    entries = {}
    for pos, t in enumerate(product(range(d), repeat=k)):
        u = 0
        for i in range(k):
            u = u * d + t[perm[i]]
        entries[(u, pos)] = 1
    return SparseMatrix(d ** k, d ** k, entries)


def _at(d, before, L, after):
    """``1^{(x) before} (x) L (x) 1^{(x) after}``."""
    M = L
    if before:
        M = SparseMatrix.identity(d ** before).kron(M)
    if after:
        M = M.kron(SparseMatrix.identity(d ** after))
    return M


def _check_budget(d, N, budget_mb):
    budget_mb = default_budget_mb() if budget_mb is None else budget_mb
    # rough footprint: every stored generator holds about d^(n+2) * d entries
    entries = sum((2 * n + 4) * d ** (n + 2) * d for n in range(N + 1))
    need_mb = entries * 250 / 2 ** 20
    if need_mb > budget_mb:
        raise BudgetExceeded("truncation N=%d over a %d-dimensional space needs about %.0f MB, budget is %.0f MB"
                             % (N, d, need_mb, budget_mb))


def canonical_cyclic_module(A, N, budget_mb=None):
    """The cyclic module ``n -> A^{(x)(n+1)}`` of a unital algebra."""
    if N < 0:
        raise ValueError("truncation must be nonnegative")
    d = A.dim
    _check_budget(d, N, budget_mb)
    unit = SparseMatrix.from_columns(d, [A.unit])
    ops = {}
    for n in range(N):
        k = n + 2
        for j in range(n + 1):
            ops[("d", n, j)] = _at(d, j, A.mult, k - j - 2)
        rot = _permute_factors(d, k, [k - 1] + list(range(k - 1)))
        ops[("d", n, n + 1)] = ops[("d", n, 0)] @ rot
        for i in range(n + 1):
            ops[("s", n, i)] = _at(d, i + 1, unit, n - i)
    for n in range(1, N + 1):
        k = n + 1
        ops[("t", n, 1)] = _permute_factors(d, k, [k - 1] + list(range(k - 1)))
    return CyclicModuleRep("cyclic", N, [d ** (n + 1) for n in range(N + 1)], ops,
                           CANONICAL_CONVENTIONS, name="Cyc(%s)" % A.name)


def coalgebra_cocyclic_module(C, N, budget_mb=None):
    """The cocyclic module ``n -> C^{(x)(n+1)}`` of a counital coalgebra."""
    if N < 0:
        raise ValueError("truncation must be nonnegative")
    d = C.dim
    _check_budget(d, N, budget_mb)
    counit = SparseMatrix.from_dense([C.counit])
    ops = {}
    for n in range(N):
        k = n + 2
        for j in range(n + 1):
            ops[("d", n, j)] = _at(d, j, C.comult, n - j)
        rot = _permute_factors(d, k, list(range(1, k)) + [0])
        ops[("d", n, n + 1)] = rot @ ops[("d", n, 0)]
        for i in range(n + 1):
            ops[("s", n, i)] = _at(d, i + 1, counit, n - i)
    for n in range(1, N + 1):
        k = n + 1
        ops[("t", n, 1)] = _permute_factors(d, k, list(range(1, k)) + [0])
    return CyclicModuleRep("cocyclic", N, [d ** (n + 1) for n in range(N + 1)], ops,
                           COALGEBRA_CONVENTIONS, name="C(%s)" % C.name)


def trivial_module(N, variance="cyclic"):
    one = SparseMatrix.identity(1)
    ops = {_key(g): one for g in generators(N)}
    return CyclicModuleRep(variance, N, [1] * (N + 1), ops, {"all": "identity"}, name="k")


def diag_hom(X, Y):
    """Cyclic module of degreewise linear maps ``X_n -> Y_n``.

    ``X`` is cocyclic and ``Y`` cyclic; a generator acts by
    ``psi -> Y(f) psi X(f)``.  Maps are vectorised row-major, so the action
    matrix is ``Y(f) (x) X(f)^T``.
    """
    if X.variance != "cocyclic" or Y.variance != "cyclic":
        raise ValueError("diag_hom needs a cocyclic first and a cyclic second argument")
    if X.N != Y.N:
        raise ValueError("truncation mismatch: %d vs %d" % (X.N, Y.N))
    ops = {_key(g): Y.generator(g).kron(X.generator(g).T) for g in generators(X.N)}
    dims = [x * y for x, y in zip(X.dims, Y.dims)]
    return CyclicModuleRep("cyclic", X.N, dims, ops,
                           {"action": "psi . f = Y(f) psi X(f)", "vectorisation": "row-major"},
                           name="Hom(%s, %s)" % (X.name, Y.name))


def hopf_cyclic_rep(data, side, N, supplied=None, budget_mb=None):
    """The C-side (cocyclic) or A-side (cyclic) module of action data.

    With trivial coefficients the modules are built from the structure maps.
    ``supplied`` (a representation or its tree) replaces the construction
    for other coefficients and is validated first.
    """
    if side not in ("coalgebra", "algebra"):
        raise ValueError("side must be 'coalgebra' or 'algebra'")
    if supplied is not None:
        rep = supplied if isinstance(supplied, CyclicModuleRep) else CyclicModuleRep.from_tree(supplied)
        want = "cocyclic" if side == "coalgebra" else "cyclic"
        if rep.variance != want or rep.N != N:
            raise RepresentationError("supplied %s-side module must be %s with truncation %d"
                                      % (side, want, N))
        rep.validate()
        return rep
    if data.coefficient_dim != 1:
        raise RepresentationError("nontrivial coefficients need supplied operator matrices")
    if side == "algebra":
        return canonical_cyclic_module(data.algebra, N, budget_mb)
    return coalgebra_cocyclic_module(data.coalgebra, N, budget_mb)


class CyclicModuleMorphism:
    """Degreewise matrices ``source_n -> target_n`` between modules of one variance."""

    def __init__(self, source, target, maps, name=None):
        if source.variance != target.variance or source.N != target.N:
            raise ValueError("source and target must share variance and truncation")
        for n, m in enumerate(maps):
            if m.shape != (target.dims[n], source.dims[n]):
                raise ValueError("degree %d map has shape %s" % (n, m.shape))
        if len(maps) != source.N + 1:
            raise ValueError("need one map per degree")
        self.source = source
        self.target = target
        self.maps = list(maps)
        self.name = name or "phi"
        self.certificate = None

    def failing_generators(self):
        bad = []
        for g in generators(self.source.N):
            a, b = g.source, g.target
            if self.source.variance == "cyclic":
                ok = self.maps[a] @ self.source.generator(g) == self.target.generator(g) @ self.maps[b]
            else:
                ok = self.maps[b] @ self.source.generator(g) == self.target.generator(g) @ self.maps[a]
            if not ok:
                bad.append(g)
        return bad

    def certify(self):
        gens = generators(self.source.N)
        bad = self.failing_generators()
        if bad:
            raise CommutationError(bad[0], "%s does not commute with %s (%d of %d generators fail)"
                                   % (self.name, bad[0], len(bad), len(gens)))
        self.certificate = {"morphism": self.name, "truncation": self.source.N,
                            "generators_checked": len(gens), "commutes": True}
        return self.certificate

    def to_tree(self):
        return {"name": self.name, "source": self.source.name, "target": self.target.name,
                "maps": [m.to_tree() for m in self.maps], "certificate": self.certificate}


def phi_map(data, N, equivariance="verbatim", budget_mb=None):
    """``phi_n(a_0..a_n)(c_0..c_n) = (c_0 > a_0) ... (c_n > a_n)``, certified."""
    data.validate(equivariance)
    Y = hopf_cyclic_rep(data, "coalgebra", N, budget_mb=budget_mb)
    X = hopf_cyclic_rep(data, "algebra", N, budget_mb=budget_mb)
    target = diag_hom(Y, X)
    dA, dC = data.algebra.dim, data.coalgebra.dim
    K = data.action
    P = SparseMatrix(dA * dC, dA, {((y * dC + c), a): v
                                   for (y, col), v in K.entries()
                                   for c, a in [divmod(col, dA)]})
    maps = []
    for n in range(N + 1):
        k = n + 1
        T = P
        for _ in range(n):
            T = T.kron(P)
        entries = {}
        for (r, col), v in T.entries():
            y = x = 0
            digits = []
            for _ in range(k):
                r, dgt = divmod(r, dA * dC)
                digits.append(dgt)
            for dgt in reversed(digits):
                yi, xi = divmod(dgt, dC)
                y = y * dA + yi
                x = x * dC + xi
            entries[(y * dC ** k + x, col)] = v
        maps.append(SparseMatrix(dA ** k * dC ** k, dA ** k, entries))
    phi = CyclicModuleMorphism(X, target, maps, name="phi")
    phi.certify()
    return phi


def enumerate_operators(rep, n, m):
    """Operator matrices of every morphism ``[n] -> [m]`` (for diagnostics)."""
    return {str(f): rep.operator(f) for f in enumerate_basis(n, m)}
