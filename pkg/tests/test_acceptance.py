"""Acceptance criteria, one test per criterion.

Every check is exact (tolerance zero).  Runtime limits are pinned below and
asserted alongside the mathematical verdict.
"""
import time

from cyclicat.algebra import builtin_algebra, swap_action, trivial_action
from cyclicat.complexes import total_complex
from cyclicat.cyclic_modules import canonical_cyclic_module, generators, phi_map
from cyclicat.exactlin import kernel_basis
from cyclicat.homology import (
    METHODS, connes_complex, cyclic_bicomplex, hc, hochschild_complex, lambda_cocycle,
    lambda_model, mixed_complex_bB, periodicity_S,
)
from cyclicat.lambda_cat import (
    Generator, LevelError, compose, enumerate_basis, evaluate, omega, omega_inv, verify_relations,
)
from cyclicat.pairing import (
    characteristic_map, coalgebra_model, external_degree0, hopf_cocycle,
    s_compatibility_probe, well_definedness_probe,
)
from cyclicat.rewriting import letters, normal_form

RELATIONS_LIMIT_S = 60.0
ORACLE_LIMIT_S = 120.0
AGREEMENT_LIMIT_S = 300.0

TEST_ALGEBRAS = ("k", "k[x]/(x^2)", "kZ/2", "kxk")


def _closed_invariant(model, p):
    """Basis of closed invariant cochains of a cocyclic model in degree p."""
    return [model.incl[p] @ z for z in kernel_basis(model.complex.d(p))]


def test_criterion_01_relation_suite(acceptance_line):
    t0 = time.perf_counter()
    rep = verify_relations(6)
    dt = time.perf_counter() - t0
    ok = rep.ok and dt < RELATIONS_LIMIT_S
    acceptance_line(1, ok, "verify_relations(6): %d instances, %d violations, %.2f s (limit %.0f s); "
                    "sigma-tau variant %s, %d instances with remainder n+1 skipped"
                    % (rep.checked, len(rep.violations), dt, RELATIONS_LIMIT_S,
                       rep.sigma_tau_variant, rep.boundary_skipped))
    assert rep.ok, rep.summary()
    assert dt < RELATIONS_LIMIT_S


def test_criterion_02_composition_oracle(acceptance_line):
    t0 = time.perf_counter()
    pairs = mismatches = 0
    basis = {(n, m): enumerate_basis(n, m) for n in range(4) for m in range(4)}
    for n in range(4):
        for k in range(4):
            for m in range(4):
                for g in basis[(n, k)]:
                    gw = letters(g.word()) or [("id", n, 0)]
                    for f in basis[(k, m)]:
                        fw = letters(f.word()) or [("id", k, 0)]
                        pairs += 1
                        h = compose(f, g)
                        expected = normal_form(fw + gw)
                        got = (h.source, h.target, h.faces, h.degeneracies, h.cyclic_power)
                        mismatches += got != expected
    dt = time.perf_counter() - t0
    ok = mismatches == 0 and dt < ORACLE_LIMIT_S
    acceptance_line(2, ok, "compose vs rewriting oracle, levels <= 3: %d pairs, %d mismatches, %.1f s (limit %.0f s)"
                    % (pairs, mismatches, dt, ORACLE_LIMIT_S))
    assert mismatches == 0
    assert dt < ORACLE_LIMIT_S


def test_criterion_03_transposition_inverse(acceptance_line):
    checked = skipped = failures = 0
    for n in range(6):
        pairs = [(Generator("d", n, j), Generator("t", n, i)) for j in range(n + 2) for i in range(n + 1)]
        if n + 1 <= 5:
            pairs += [(Generator("s", n, s), Generator("t", n + 1, u)) for s in range(n + 1) for u in range(n + 2)]
        for x, t in pairs:
            try:
                fwd = omega(x, t)
            except LevelError:
                skipped += 1
                continue
            checked += 1
            back = omega_inv(fwd.left, fwd.right)
            same_pair = (back.left, back.right) == (x, t)
            same_map = evaluate([x, t]) == evaluate([fwd.left, fwd.right])
            failures += not (same_pair and same_map)
    ok = failures == 0
    acceptance_line(3, ok, "omega_inv . omega = id on %d generator pairs with level <= 5, %d failures; "
                    "%d degeneracy pairs with remainder n+1 have no transposition and were skipped"
                    % (checked, failures, skipped))
    assert failures == 0


def _d_squared_zero(C):
    return all((C.d(n + C.degree) @ C.d(n)).is_zero() for n in C.degrees())


def test_criterion_04_structural(acceptance_line):
    results = {}
    for name in TEST_ALGEBRAS:
        X = canonical_cyclic_module(builtin_algebra(name), 4)
        complexes = {
            "Hochschild": hochschild_complex(X),
            "lambda": connes_complex(X),
            "Tot CC": total_complex(cyclic_bicomplex(X)),
            "Tot mixed": total_complex(mixed_complex_bB(X)),
        }
        for label, C in complexes.items():
            results[(name, label)] = _d_squared_zero(C)
    bad = [k for k, v in results.items() if not v]
    ok = not bad
    acceptance_line(4, ok, "d^2 = 0 at N=4 for %d (algebra, complex) pairs, failures: %s"
                    % (len(results), bad or "none"))
    assert not bad


def test_criterion_05_known_values(acceptance_line):
    X = canonical_cyclic_module(builtin_algebra("k"), 5)
    got = {m: [hc(X, m, range(5))[n] for n in range(5)] for m in METHODS}
    ok = all(v == [1, 0, 1, 0, 1] for v in got.values())
    acceptance_line(5, ok, "HC_0..4(k) by method: %s (expected 1,0,1,0,1)"
                    % "; ".join("%s %s" % (m, ",".join(map(str, v))) for m, v in got.items()))
    assert ok


def test_criterion_06_cross_model_agreement(acceptance_line):
    t0 = time.perf_counter()
    table = {}
    for name in TEST_ALGEBRAS:
        X = canonical_cyclic_module(builtin_algebra(name), 6)
        for variance, Y in (("homology", X), ("cohomology", X.dual())):
            table[(name, variance)] = {m: hc(Y, m) for m in METHODS}
    dt = time.perf_counter() - t0
    disagree = [k for k, r in table.items() if len({tuple(sorted(v.items())) for v in r.values()}) != 1]
    ok = not disagree and dt < AGREEMENT_LIMIT_S
    summary = "; ".join("%s %s" % (name, ",".join(str(v) for _, v in sorted(table[(name, "homology")]["connes"].items())))
                        for name in TEST_ALGEBRAS)
    acceptance_line(6, ok, "connes/bicomplex/mixed agree at N=6, degrees 0..5, homology and cohomology "
                    "(%s), disagreements: %s, %.1f s (limit %.0f s)"
                    % (summary, disagree or "none", dt, AGREEMENT_LIMIT_S))
    assert not disagree
    assert dt < AGREEMENT_LIMIT_S


def test_criterion_07_phi_certificate(acceptance_line):
    data = swap_action()
    phi = phi_map(data, 3)
    bad = phi.failing_generators()
    ok = phi.certificate["commutes"] and not bad and phi.certificate["generators_checked"] == len(generators(3))
    acceptance_line(7, ok, "phi_map on the Z/2 swap example at N=3 commutes with all %d generators"
                    % phi.certificate["generators_checked"])
    assert ok


def test_criterion_08_characteristic_map(acceptance_line):
    data = swap_action()
    nu = hopf_cocycle(data, "algebra", 0, [1, 1])
    notes = []
    ok = True
    # p = 0: against the external product for every basis element of C
    for c in range(data.coalgebra.dim):
        vec = [0] * data.coalgebra.dim
        vec[c] = 1
        beta = hopf_cocycle(data, "coalgebra", 0, vec)
        out = characteristic_map(beta, nu, data)
        ext = external_degree0(nu, beta, data)
        ok &= out.vector == ext.vector and out.certificate["b_closed"] and out.certificate["cyclic_invariant"]
    notes.append("p=0 equals external_degree0 on both basis elements")
    # p = 1: the closed invariant cochains of kZ/2 in degree 1 are zero
    z1 = _closed_invariant(coalgebra_model(data, 2), 1)
    xi1 = hopf_cocycle(data, "coalgebra", 1, [0] * 4)
    out1 = characteristic_map(xi1, nu, data)
    ok &= out1.certificate["b_closed"] and out1.certificate["cyclic_invariant"]
    notes.append("p=1 certified, but the degree-1 cocycle space has dimension %d so xi=0" % len(z1))
    # p = 2: a nonzero cocycle with nonzero output
    z2 = _closed_invariant(coalgebra_model(data, 3), 2)
    xi2 = hopf_cocycle(data, "coalgebra", 2, z2[0])
    out2 = characteristic_map(xi2, nu, data)
    ok &= out2.certificate["b_closed"] and out2.certificate["cyclic_invariant"] and any(out2.vector)
    notes.append("p=2 nonzero output certified")
    acceptance_line(8, ok, "characteristic map on the Z/2 example: " + "; ".join(notes))
    assert ok


def test_criterion_09_descent(acceptance_line):
    data = swap_action()
    nu = hopf_cocycle(data, "algebra", 0, [1, 1])
    z2 = _closed_invariant(coalgebra_model(data, 3), 2)
    xi = hopf_cocycle(data, "coalgebra", 2, z2[0])
    report = well_definedness_probe(data, xi, nu, trials=20, seed=0)
    nonzero = sum(t["perturbation_nonzero"] for t in report.trials)
    ok = report.verdict and report.passed == 20
    acceptance_line(9, ok, "well_definedness_probe on the Z/2 example at p=2: %d/20 equal classes "
                    "(%d perturbations nonzero)" % (report.passed, nonzero))
    assert ok


def test_criterion_10_periodicity(acceptance_line):
    notes = []
    ok = True
    # S of a closed class is closed, and S sends coboundaries to coboundaries
    for name in ("k", "kZ/2", "kxk"):
        Y = canonical_cyclic_module(builtin_algebra(name), 5).dual()
        model = lambda_model(Y)
        for p in (0, 1, 2):
            if p + 3 > Y.N:
                continue
            for z in _closed_invariant(model, p):
                s = periodicity_S(lambda_cocycle(model, p, z), model)
                ok &= not any(model.hochschild.d(s.degree) @ s.vector)
            if p >= 1:
                prev = model.incl[p - 1]
                for col in range(prev.ncols):
                    coeffs = tuple(1 if i == col else 0 for i in range(prev.ncols))
                    cob = model.hochschild.d(p - 1) @ (prev @ coeffs)
                    s = periodicity_S(lambda_cocycle(model, p, cob), model)
                    ok &= model.class_equal(p + 2, s.vector, (0,) * len(s.vector))
    notes.append("closure and coboundary checks on Cyc(k), Cyc(kZ/2), Cyc(kxk) duals at N=5")
    verdicts = {}
    triv = trivial_action(builtin_algebra("kxk"))
    verdicts["trivial"] = s_compatibility_probe(
        triv, hopf_cocycle(triv, "coalgebra", 0, [1]), hopf_cocycle(triv, "algebra", 0, [1, 2])).verdict
    swap = swap_action()
    verdicts["Z/2"] = s_compatibility_probe(
        swap, hopf_cocycle(swap, "coalgebra", 0, [0, 1]), hopf_cocycle(swap, "algebra", 0, [1, 1])).verdict
    notes.append("s_compatibility_probe verdicts: trivial %s, Z/2 %s" % (verdicts["trivial"], verdicts["Z/2"]))
    ok &= all(verdicts.values())
    acceptance_line(10, ok, "; ".join(notes))
    assert ok
