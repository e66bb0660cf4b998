"""Finite-dimensional algebras, coalgebras, Hopf algebras and equivariant actions.

Every structure map is a :class:`SparseMatrix` in the declared bases; a map
``V -> W`` has shape ``(dim W, dim V)`` and tensor factors are indexed
row-major (``e_i (x) e_j`` has index ``i*dim + j``).
"""
from fractions import Fraction
from itertools import product

from cyclicat.exactlin import Q, SparseMatrix

__all__ = [
    "StructureError", "AlgebraPresentation", "Coalgebra", "HopfAlgebra",
    "EquivariantActionData", "swap_matrix", "group_algebra", "builtin_algebra",
    "BUILTIN_ALGEBRAS", "trivial_action", "swap_action",
]


class StructureError(ValueError):
    """An axiom fails; ``failures`` names every failing identity."""

    def __init__(self, failures):
        self.failures = list(failures)
        super().__init__("; ".join(self.failures))


def _eye(n):
    return SparseMatrix.identity(n)


def swap_matrix(d1, d2):
    """``V (x) W -> W (x) V`` for dim V = d1, dim W = d2."""
    return SparseMatrix(d1 * d2, d1 * d2,
                        {(j * d1 + i, i * d2 + j): 1 for i in range(d1) for j in range(d2)})


def _col(vec):
    return SparseMatrix.from_columns(len(vec), [tuple(vec)])


def _row(vec):
    return SparseMatrix.from_dense([list(vec)])


class AlgebraPresentation:
    """Unital associative algebra given by structure constants.

    ``products`` maps ``(i, j)`` to ``{k: c}`` meaning
    ``e_i e_j = sum_k c e_k``.
    """

    def __init__(self, labels, products, unit, name=None):
        self.labels = list(labels)
        self.name = name or "A"
        d = self.dim
        self.unit = tuple(Q(x) for x in unit)
        if len(self.unit) != d:
            raise ValueError("unit vector has length %d, algebra has dimension %d" % (len(self.unit), d))
        entries = {}
        for (i, j), out in products.items():
            for k, c in out.items():
                if not (0 <= i < d and 0 <= j < d and 0 <= k < d):
                    raise ValueError("structure constant index out of range: %r" % ((i, j, k),))
                entries[(k, i * d + j)] = Q(c)
        self.mult = SparseMatrix(d, d * d, entries)

    @property
    def dim(self):
        return len(self.labels)

    def product(self, i, j):
        d = self.dim
        col = i * d + j
        return {k: self.mult[k, col] for k in range(d) if self.mult[k, col]}

    def multiply(self, u, v):
        d = self.dim
        out = [Fraction(0)] * d
        for i, x in enumerate(u):
            if not x:
                continue
            for j, y in enumerate(v):
                if not y:
                    continue
                for k, c in self.product(i, j).items():
                    out[k] += x * y * c
        return tuple(out)

    def check(self):
        d = self.dim
        fails = []
        m = self.mult
        if m @ m.kron(_eye(d)) != m @ _eye(d).kron(m):
            for i, j, k in product(range(d), repeat=3):
                e = [_basis(d, t) for t in (i, j, k)]
                if self.multiply(self.multiply(e[0], e[1]), e[2]) != self.multiply(e[0], self.multiply(e[1], e[2])):
                    fails.append("associativity fails at (%s, %s, %s)"
                                 % (self.labels[i], self.labels[j], self.labels[k]))
                    break
        u = _col(self.unit)
        if m @ u.kron(_eye(d)) != _eye(d):
            fails.append("unit is not a left identity")
        if m @ _eye(d).kron(u) != _eye(d):
            fails.append("unit is not a right identity")
        return fails

    def validate(self):
        fails = self.check()
        if fails:
            raise StructureError(fails)
        return self

    def is_trace(self, functional):
        """True when ``functional(ab - ba) = 0`` for all basis pairs."""
        f = tuple(Q(x) for x in functional)
        diff = self.mult - self.mult @ swap_matrix(self.dim, self.dim)
        return not any(diff.rmul_vector(f))

    def __repr__(self):
        return "AlgebraPresentation(%r, dim=%d)" % (self.name, self.dim)


def _basis(d, i):
    v = [Fraction(0)] * d
    v[i] = Fraction(1)
    return tuple(v)


class Coalgebra:
    """Counital coassociative coalgebra: ``comult`` is d^2 x d, ``counit`` length d."""

    def __init__(self, labels, comult, counit, name=None):
        self.labels = list(labels)
        self.name = name or "C"
        self.comult = comult
        self.counit = tuple(Q(x) for x in counit)
        d = self.dim
        if comult.shape != (d * d, d) or len(self.counit) != d:
            raise ValueError("coalgebra structure maps have wrong shape")

    @property
    def dim(self):
        return len(self.labels)

    def check(self):
        d = self.dim
        D = self.comult
        e = _row(self.counit)
        fails = []
        if D.kron(_eye(d)) @ D != _eye(d).kron(D) @ D:
            fails.append("coassociativity fails")
        if e.kron(_eye(d)) @ D != _eye(d):
            fails.append("left counit law fails")
        if _eye(d).kron(e) @ D != _eye(d):
            fails.append("right counit law fails")
        return fails


class HopfAlgebra:
    def __init__(self, algebra, coalgebra, antipode, name=None):
        if algebra.dim != coalgebra.dim:
            raise ValueError("algebra and coalgebra structures differ in dimension")
        self.algebra = algebra
        self.coalgebra = coalgebra
        self.antipode = antipode
        self.name = name or algebra.name

    @property
    def dim(self):
        return self.algebra.dim

    @property
    def labels(self):
        return self.algebra.labels

    def check(self):
        d = self.dim
        m, D = self.algebra.mult, self.coalgebra.comult
        e = _row(self.coalgebra.counit)
        u = _col(self.algebra.unit)
        I = _eye(d)
        fails = self.algebra.check() + self.coalgebra.check()
        mid = I.kron(swap_matrix(d, d)).kron(I)
        if D @ m != m.kron(m) @ mid @ D.kron(D):
            fails.append("comultiplication is not multiplicative")
        if e @ m != e.kron(e):
            fails.append("counit is not multiplicative")
        if D @ u != u.kron(u):
            fails.append("comultiplication does not preserve the unit")
        if (e @ u)[0, 0] != 1:
            fails.append("counit of the unit is not 1")
        S = self.antipode
        ue = u @ e
        if m @ S.kron(I) @ D != ue:
            fails.append("left antipode law fails")
        if m @ I.kron(S) @ D != ue:
            fails.append("right antipode law fails")
        return fails


def group_algebra(orders, name=None):
    """Hopf algebra of a product of cyclic groups ``Z/o1 x Z/o2 x ...``."""
    orders = list(orders)
    if not orders or any(o < 1 for o in orders):
        raise ValueError("group orders must be positive")
    elems = list(product(*[range(o) for o in orders]))
    index = {g: i for i, g in enumerate(elems)}

    def label(g):
        if len(orders) == 1:
            return "e" if g[0] == 0 else ("g" if g[0] == 1 else "g^%d" % g[0])
        return "(" + ",".join(str(x) for x in g) + ")"

    labels = [label(g) for g in elems]
    d = len(elems)

    def mul(g, h):
        return tuple((a + b) % o for a, b, o in zip(g, h, orders))

    def inv(g):
        return tuple((-a) % o for a, o in zip(g, orders))

    prods = {(index[g], index[h]): {index[mul(g, h)]: 1} for g in elems for h in elems}
    unit = [1 if i == 0 else 0 for i in range(d)]
    name = name or "k[" + " x ".join("Z/%d" % o for o in orders) + "]"
    alg = AlgebraPresentation(labels, prods, unit, name=name)
    comult = SparseMatrix(d * d, d, {(i * d + i, i): 1 for i in range(d)})
    coalg = Coalgebra(labels, comult, [1] * d, name=name)
    S = SparseMatrix(d, d, {(index[inv(g)], index[g]): 1 for g in elems})
    hopf = HopfAlgebra(alg, coalg, S, name=name)
    hopf.group_elements = elems
    hopf.group_orders = orders
    return hopf


def _builtin_k():
    return AlgebraPresentation(["1"], {(0, 0): {0: 1}}, [1], name="k")


def _builtin_dual_numbers():
    return AlgebraPresentation(["1", "x"], {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}},
                               [1, 0], name="k[x]/(x^2)")


def _builtin_k_times_k():
    return AlgebraPresentation(["e1", "e2"], {(0, 0): {0: 1}, (1, 1): {1: 1}}, [1, 1], name="kxk")


def _builtin_upper_triangular():
    return AlgebraPresentation(["e11", "e12", "e22"],
                               {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 2): {1: 1}, (2, 2): {2: 1}},
                               [1, 0, 1], name="T2")


BUILTIN_ALGEBRAS = {
    "k": _builtin_k,
    "k[x]/(x^2)": _builtin_dual_numbers,
    "kZ/2": lambda: group_algebra([2], name="kZ/2").algebra,
    "kxk": _builtin_k_times_k,
    "T2": _builtin_upper_triangular,
}


def builtin_algebra(name):
    try:
        return BUILTIN_ALGEBRAS[name]()
    except KeyError:
        raise KeyError("unknown built-in algebra %r (known: %s)"
                       % (name, ", ".join(sorted(BUILTIN_ALGEBRAS)))) from None


class EquivariantActionData:
    """A Hopf algebra H, an H-module coalgebra C, an H-module algebra A and
    an action ``C (x) A -> A``.

    ``act_C`` has shape (dim C, dim H * dim C), ``act_A`` has shape
    (dim A, dim H * dim A), ``action`` has shape (dim A, dim C * dim A).
    Coefficients are the trivial one-dimensional module.
    """

    coefficient_dim = 1

    def __init__(self, hopf, coalgebra, act_C, algebra, act_A, action, name=None):
        self.hopf = hopf
        self.coalgebra = coalgebra
        self.act_C = act_C
        self.algebra = algebra
        self.act_A = act_A
        self.action = action
        self.name = name or "action data"
        dH, dC, dA = hopf.dim, coalgebra.dim, algebra.dim
        for mat, shape, what in ((act_C, (dC, dH * dC), "H-action on C"),
                                 (act_A, (dA, dH * dA), "H-action on A"),
                                 (action, (dA, dC * dA), "action of C on A")):
            if mat.shape != shape:
                raise ValueError("%s has shape %s, expected %s" % (what, mat.shape, shape))

    def act(self, c):
        """Matrix of ``a -> c > a`` for the basis element c."""
        dA = self.algebra.dim
        cols = [self.action.column(c * dA + j) for j in range(dA)]
        return SparseMatrix.from_columns(dA, cols)

    def check(self, equivariance="verbatim"):
        H, C, A = self.hopf, self.coalgebra, self.algebra
        dH, dC, dA = H.dim, C.dim, A.dim
        IH, IC, IA = _eye(dH), _eye(dC), _eye(dA)
        mH, DH = H.algebra.mult, H.coalgebra.comult
        eH, eC = _row(H.coalgebra.counit), _row(C.counit)
        uH, uA = _col(H.algebra.unit), _col(A.unit)
        mA, DC = A.mult, C.comult
        aC, aA, act = self.act_C, self.act_A, self.action
        fails = ["H: " + f for f in H.check()]
        fails += ["C: " + f for f in C.check()]
        fails += ["A: " + f for f in A.check()]
        if aC @ mH.kron(IC) != aC @ IH.kron(aC):
            fails.append("H-action on C is not associative")
        if aC @ uH.kron(IC) != IC:
            fails.append("H-action on C is not unital")
        if DC @ aC != aC.kron(aC) @ IH.kron(swap_matrix(dH, dC)).kron(IC) @ DH.kron(DC):
            fails.append("C is not an H-module coalgebra (comultiplication)")
        if eC @ aC != eH.kron(eC):
            fails.append("C is not an H-module coalgebra (counit)")
        if aA @ mH.kron(IA) != aA @ IH.kron(aA):
            fails.append("H-action on A is not associative")
        if aA @ uH.kron(IA) != IA:
            fails.append("H-action on A is not unital")
        if aA @ IH.kron(mA) != mA @ aA.kron(aA) @ IH.kron(swap_matrix(dH, dA)).kron(IA) @ DH.kron(IA).kron(IA):
            fails.append("A is not an H-module algebra (multiplication)")
        if aA @ IH.kron(uA) != uA @ eH:
            fails.append("A is not an H-module algebra (unit)")
        if act @ IC.kron(mA) != mA @ act.kron(act) @ IC.kron(swap_matrix(dC, dA)).kron(IA) @ DC.kron(IA).kron(IA):
            fails.append("c > (a1 a2) != (c1 > a1)(c2 > a2)")
        if act @ IC.kron(uA) != uA @ eC:
            fails.append("c > 1 != eps(c) 1")
        if equivariance == "verbatim":
            if aA @ IH.kron(act) != act @ aC.kron(IA):
                fails.append("equivariance h(c > a) = h(c) > a fails")
        elif equivariance == "diagonal":
            rhs = act @ aC.kron(aA) @ IH.kron(swap_matrix(dH, dC)).kron(IA) @ DH.kron(IC).kron(IA)
            if aA @ IH.kron(act) != rhs:
                fails.append("diagonal equivariance h(c > a) = h1(c) > h2(a) fails")
        elif equivariance is not None:
            raise ValueError("equivariance mode must be 'verbatim', 'diagonal' or None")
        return fails

    def validate(self, equivariance="verbatim"):
        fails = self.check(equivariance)
        if fails:
            raise StructureError(fails)
        return self


def _left_regular(hopf):
    """Left multiplication of H on itself as a (d, d*d) matrix."""
    return hopf.algebra.mult


def trivial_action(algebra=None):
    """H = C = k acting on ``algebra`` (default k) through the counit."""
    algebra = algebra or _builtin_k()
    H = group_algebra([1], name="k")
    dA = algebra.dim
    I = _eye(dA)
    return EquivariantActionData(H, H.coalgebra, _left_regular(H), algebra, I, I,
                                 name="trivial action on %s" % algebra.name)


def swap_action():
    """H = C = kZ/2 acting on A = k x k by swapping the two idempotents."""
    H = group_algebra([2], name="kZ/2")
    A = _builtin_k_times_k()
    swap = SparseMatrix(2, 2, {(0, 1): 1, (1, 0): 1})
    blocks = [SparseMatrix.identity(2), swap]
    entries = {}
    for c, mat in enumerate(blocks):
        for (r, col), v in mat.entries():
            entries[(r, c * 2 + col)] = v
    act = SparseMatrix(2, 4, entries)
    return EquivariantActionData(H, H.coalgebra, _left_regular(H), A, act, act,
                                 name="kZ/2 swapping k x k")
