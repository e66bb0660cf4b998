"""Cup products between Hopf-cyclic cocycles and cyclic cochains on an algebra.

Only the pairings with one argument in degree zero are built: a degree-p
cocycle ``xi`` of the coalgebra C against an invariant trace ``nu`` on the
algebra A gives a degree-p cyclic cocycle on A,

    (a_0, ..., a_p) -> nu( collapse( phi_p(a_0..a_p)(xi) ) ),

where ``phi`` is the certified module map of :func:`phi_map` and the
collapse is the iterated last face of the A-side module.
"""
import random
from dataclasses import dataclass, field
from functools import lru_cache

from cyclicat.cyclic_modules import canonical_cyclic_module, coalgebra_cocyclic_module, phi_map
from cyclicat.exactlin import Q, SparseMatrix
from cyclicat.homology import WindowError, lambda_cocycle, lambda_model, periodicity_S
from cyclicat.lambda_cat import Generator

__all__ = [
    "GateError", "ConventionError", "HopfCocycle", "CyclicCochain", "hopf_cocycle",
    "external_degree0", "pairing_formula", "characteristic_map", "class_equal", "algebra_model",
    "coalgebra_model", "well_definedness_probe", "s_compatibility_probe", "ProbeReport",
]


class GateError(ValueError):
    """An input cocycle is not closed or not invariant."""


class ConventionError(ValueError):
    """An output failed its closure or invariance certificate."""


@dataclass
class HopfCocycle:
    side: str
    degree: int
    vector: tuple
    certificate: dict = field(default_factory=dict)


@dataclass
class CyclicCochain:
    """Functional on ``A^{(x)(p+1)}``; ``vector[i]`` is its value on basis tensor i (row-major)."""

    degree: int
    vector: tuple
    certificate: dict = field(default_factory=dict)

    def value(self, *indices):
        dA = round(len(self.vector) ** (1 / (self.degree + 1)))
        pos = 0
        for i in indices:
            pos = pos * dA + i
        return self.vector[pos]

    def __add__(self, other):
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        return CyclicCochain(self.degree, tuple(a + b for a, b in zip(self.vector, other.vector)))

    def scale(self, k):
        k = Q(k)
        return CyclicCochain(self.degree, tuple(k * a for a in self.vector))


# Models are cached per structure object and truncation.
@lru_cache(maxsize=64)
def _algebra_model(algebra, N):
    return lambda_model(canonical_cyclic_module(algebra, N).dual())


@lru_cache(maxsize=64)
def _coalgebra_model(coalgebra, N):
    return lambda_model(coalgebra_cocyclic_module(coalgebra, N))


@lru_cache(maxsize=64)
def _phi(data, N):
    return phi_map(data, N)


def algebra_model(data, N):
    """Connes' cochain model of the cyclic cochains on A at truncation N."""
    return _algebra_model(data.algebra, N)


def coalgebra_model(data, N):
    """Connes' cochain model of the cocyclic module of C at truncation N."""
    return _coalgebra_model(data.coalgebra, N)


def _gate(model, p, vector, what):
    try:
        c = lambda_cocycle(model, p, vector)
    except ValueError as exc:
        raise GateError("%s: %s" % (what, exc)) from None
    return c.certificate


def hopf_cocycle(data, side, degree, vector):
    """Gate a representative: closed and invariant under the signed cyclic operator."""
    vector = tuple(Q(v) for v in vector)
    if side == "coalgebra":
        cert = _gate(coalgebra_model(data, degree + 1), degree, vector, "coalgebra cocycle")
    elif side == "algebra":
        if degree != 0:
            raise ValueError("algebra-side cocycles are supported in degree 0 only")
        cert = _gate(algebra_model(data, 1), 0, vector, "algebra cocycle (trace condition)")
    else:
        raise ValueError("side must be 'coalgebra' or 'algebra'")
    return HopfCocycle(side, degree, vector, dict(cert))


def _check_side(c, side, degree=None):
    if not isinstance(c, HopfCocycle) or c.side != side:
        raise GateError("expected a gated %s-side cocycle" % side)
    if degree is not None and c.degree != degree:
        raise GateError("expected degree %d, got %d" % (degree, c.degree))


def certify_cochain(data, cochain):
    """Attach b-closure and signed-cyclic invariance certificates (or raise)."""
    p = cochain.degree
    model = algebra_model(data, p + 1)
    v = cochain.vector
    bad = [i for i, x in enumerate(model.hochschild.d(p) @ v) if x]
    if bad:
        raise ConventionError("b(output) != 0 in degree %d (first nonzero coefficient at index %d)" % (p, bad[0]))
    if not model.subspaces[p].contains(v):
        raise ConventionError("output is not invariant under the signed cyclic operator in degree %d" % p)
    cochain.certificate.update({"b_closed": True, "cyclic_invariant": True})
    return cochain


def external_degree0(alpha, beta, data):
    """``a -> alpha(beta > a)`` for a trace alpha on A and an element beta of C."""
    _check_side(alpha, "algebra", 0)
    _check_side(beta, "coalgebra", 0)
    dA, dC = data.algebra.dim, data.coalgebra.dim
    out = []
    for a in range(dA):
        acted = [Q(0)] * dA
        for c in range(dC):
            if beta.vector[c]:
                for y in range(dA):
                    acted[y] += beta.vector[c] * data.action[y, c * dA + a]
        out.append(sum(x * y for x, y in zip(alpha.vector, acted)))
    return certify_cochain(data, CyclicCochain(0, tuple(out)))


def collapse_matrix(X, p):
    """Iterated last face ``X_p -> X_0`` read from the module's own face matrices."""
    M = SparseMatrix.identity(X.dims[0])
    for n in range(p):
        M = M @ X.generator(Generator("d", n, n + 1))
    return M


def pairing_formula(xi_vector, nu_vector, data, p, N=None):
    """The ungated composite on raw vectors; returns the coefficient vector and phi."""
    phi = _phi(data, max(N or 0, p + 1))
    X = phi.source
    xi_row = SparseMatrix.from_dense([[Q(v) for v in xi_vector]])
    evaluate_at_xi = SparseMatrix.identity(X.dims[p]).kron(xi_row) @ phi.maps[p]
    row = collapse_matrix(X, p).rmul_vector(tuple(Q(v) for v in nu_vector))
    return evaluate_at_xi.rmul_vector(row), phi


def characteristic_map(xi, nu, data, N=None):
    _check_side(xi, "coalgebra")
    _check_side(nu, "algebra", 0)
    vec, phi = pairing_formula(xi.vector, nu.vector, data, xi.degree, N)
    out = CyclicCochain(xi.degree, vec)
    out.certificate["phi"] = dict(phi.certificate)
    return certify_cochain(data, out)


def class_equal(c1, c2, model):
    """True iff two closed invariant cochains differ by a coboundary of ``model``."""
    if c1.degree != c2.degree:
        raise ValueError("degree mismatch: %d vs %d" % (c1.degree, c2.degree))
    return model.class_equal(c1.degree, c1.vector, c2.vector)


@dataclass
class ProbeReport:
    name: str
    trials: list = field(default_factory=list)
    verdict: bool = True
    notes: list = field(default_factory=list)

    @property
    def passed(self):
        return sum(1 for t in self.trials if t.get("equal"))

    def to_tree(self):
        return {"name": self.name, "verdict": self.verdict, "passed": self.passed,
                "trials": self.trials, "notes": self.notes}


def _random_coboundary(model, p, rng, spread=5):
    """b of a random invariant cochain in degree p-1 (zero when p = 0)."""
    X = model.module
    if p == 0:
        return (Q(0),) * X.dims[0]
    incl = model.incl[p - 1]
    coeffs = tuple(Q(rng.randint(-spread, spread)) for _ in range(incl.ncols))
    return model.hochschild.d(p - 1) @ (incl @ coeffs)


def well_definedness_probe(data, xi, nu, trials=20, seed=0, perturbations=None):
    """Perturb xi by coboundaries and compare the output classes on A.

    ``perturbations`` replaces the random coboundaries with explicit
    vectors; each perturbed cocycle still has to pass the gate.
    """
    _check_side(xi, "coalgebra")
    p = xi.degree
    rng = random.Random(seed)
    cmodel = coalgebra_model(data, p + 1)
    amodel = algebra_model(data, p + 1)
    base = characteristic_map(xi, nu, data)
    report = ProbeReport("well-definedness")
    if p == 0 and perturbations is None:
        report.notes.append("degree 0 has no coboundaries; every perturbation is zero")
    deltas = perturbations if perturbations is not None else [
        _random_coboundary(cmodel, p, rng) for _ in range(trials)]
    for k, delta in enumerate(deltas):
        moved = tuple(a + Q(b) for a, b in zip(xi.vector, delta))
        entry = {"trial": k, "perturbation_nonzero": any(delta)}
        try:
            xi2 = hopf_cocycle(data, "coalgebra", p, moved)
        except GateError as exc:
            entry.update(equal=False, rejected=str(exc))
            report.trials.append(entry)
            report.verdict = False
            continue
        entry["equal"] = class_equal(characteristic_map(xi2, nu, data), base, amodel)
        report.verdict &= entry["equal"]
        report.trials.append(entry)
    return report


def s_compatibility_probe(data, xi, nu, N=None):
    """Compare S(char(xi, nu)) with char(S(xi), nu) as classes in degree p + 2."""
    _check_side(xi, "coalgebra")
    p = xi.degree
    need = p + 3
    N = need if N is None else N
    if N < need:
        raise WindowError("S-compatibility in degree %d needs truncation %d, have %d" % (p, need, N))
    amodel = algebra_model(data, N)
    cmodel = coalgebra_model(data, N)
    psi = characteristic_map(xi, nu, data)
    s_psi = periodicity_S(lambda_cocycle(amodel, p, psi.vector), amodel)
    s_xi = periodicity_S(lambda_cocycle(cmodel, p, xi.vector), cmodel)
    xi_s = hopf_cocycle(data, "coalgebra", p + 2, s_xi.vector)
    psi_s = characteristic_map(xi_s, nu, data)
    equal = class_equal(CyclicCochain(p + 2, s_psi.vector), psi_s, amodel)
    report = ProbeReport("S-compatibility", verdict=equal)
    report.trials.append({"degree": p, "equal": equal,
                          "S_output_nonzero": any(s_psi.vector),
                          "transported_nonzero": any(psi_s.vector)})
    return report
