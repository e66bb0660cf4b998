import pytest
from hypothesis import given
from hypothesis import strategies as st

from cyclicat.algebra import builtin_algebra, swap_action, trivial_action
from cyclicat.exactlin import kernel_basis
from cyclicat.homology import WindowError
from cyclicat.pairing import (
    CyclicCochain, GateError, algebra_model, characteristic_map, class_equal, coalgebra_model,
    external_degree0, hopf_cocycle, pairing_formula, s_compatibility_probe, well_definedness_probe,
)


def _closed_invariant(model, p):
    return [model.incl[p] @ z for z in kernel_basis(model.complex.d(p))]


def test_counit_action_echoes_the_trace():
    data = trivial_action(builtin_algebra("kxk"))
    nu = hopf_cocycle(data, "algebra", 0, [2, 5])
    beta = hopf_cocycle(data, "coalgebra", 0, [1])
    assert external_degree0(nu, beta, data).vector == (2, 5)
    beta3 = hopf_cocycle(data, "coalgebra", 0, [3])
    assert external_degree0(nu, beta3, data).vector == (6, 15)


def test_swap_with_g_permutes_a_symmetric_trace_to_itself():
    data = swap_action()
    nu = hopf_cocycle(data, "algebra", 0, [1, 1])
    g = hopf_cocycle(data, "coalgebra", 0, [0, 1])
    assert external_degree0(nu, g, data).vector == (1, 1)
    skew = hopf_cocycle(data, "algebra", 0, [1, 0])
    assert external_degree0(skew, g, data).vector == (0, 1)


def test_degree_zero_pairing_is_the_external_product():
    data = swap_action()
    nu = hopf_cocycle(data, "algebra", 0, [3, -1])
    for vec in ([1, 0], [0, 1], [2, -7]):
        beta = hopf_cocycle(data, "coalgebra", 0, vec)
        assert characteristic_map(beta, nu, data).vector == external_degree0(nu, beta, data).vector


def test_formula_shape_on_an_elementary_tensor():
    # xi = e (x) g is not a cocycle, so the formula is evaluated without the gate
    data = swap_action()
    e, g = (data.coalgebra.labels.index(x) for x in ("e", "g"))
    xi = [0] * 4
    xi[e * 2 + g] = 1
    vec, _ = pairing_formula(xi, [1, 1], data, 1)
    A = data.algebra
    expected = []
    for a0 in range(2):
        for a1 in range(2):
            acted = data.act(g).column(a1)
            prod = A.multiply([int(i == a0) for i in range(2)], acted)
            expected.append(sum(prod))
    assert list(vec) == expected == [0, 1, 1, 0]


@given(st.lists(st.integers(-4, 4), min_size=6, max_size=6))
def test_bilinear(coeffs):
    data = swap_action()
    z = _closed_invariant(coalgebra_model(data, 3), 2)
    a, b, c, d, u, v = coeffs
    xi1 = [x * a for x in z[0]]
    xi2 = [x * b + y * c for x, y in zip(z[1], z[2])]
    both = [x + y for x, y in zip(xi1, xi2)]
    nu1, nu2 = [d, d], [u, u]
    f = lambda xi, nu: pairing_formula(xi, nu, data, 2)[0]
    assert f(both, nu1) == tuple(x + y for x, y in zip(f(xi1, nu1), f(xi2, nu1)))
    assert f(xi1, [d + u, d + u]) == tuple(x + y for x, y in zip(f(xi1, nu1), f(xi1, nu2)))
    assert f(xi1, [v * d, v * d]) == tuple(v * x for x in f(xi1, nu1))


def test_gates():
    data = swap_action()
    with pytest.raises(GateError):
        hopf_cocycle(data, "coalgebra", 1, [0, 1, 0, 0])
    with pytest.raises(GateError):
        hopf_cocycle(trivial_action(builtin_algebra("T2")), "algebra", 0, [0, 1, 0])
    with pytest.raises(ValueError):
        hopf_cocycle(data, "algebra", 1, [1] * 4)
    with pytest.raises(ValueError):
        hopf_cocycle(data, "middle", 0, [1, 1])
    nu = hopf_cocycle(data, "algebra", 0, [1, 1])
    with pytest.raises(GateError):
        characteristic_map(nu, nu, data)


def test_class_equal():
    data = swap_action()
    model = algebra_model(data, 4)
    nu = hopf_cocycle(data, "algebra", 0, [1, 1])
    xi = hopf_cocycle(data, "coalgebra", 2, _closed_invariant(coalgebra_model(data, 3), 2)[0])
    c = characteristic_map(xi, nu, data)
    assert class_equal(c, c, model)
    incl = model.incl[1]
    cob = model.hochschild.d(1) @ (incl @ tuple(range(1, incl.ncols + 1)))
    assert class_equal(c, c + CyclicCochain(2, cob), model)
    with pytest.raises(ValueError):
        class_equal(c, CyclicCochain(0, (1, 1)), model)

    k = trivial_action(builtin_algebra("k"))
    trace = external_degree0(hopf_cocycle(k, "algebra", 0, [1]), hopf_cocycle(k, "coalgebra", 0, [1]), k)
    assert not class_equal(trace, CyclicCochain(0, (0,)), algebra_model(k, 2))


def test_probe_with_zero_and_rejected_perturbations():
    data = swap_action()
    nu = hopf_cocycle(data, "algebra", 0, [1, 1])
    xi = hopf_cocycle(data, "coalgebra", 2, _closed_invariant(coalgebra_model(data, 3), 2)[0])
    zero = well_definedness_probe(data, xi, nu, perturbations=[[0] * 8])
    assert zero.verdict and zero.passed == 1 and not zero.trials[0]["perturbation_nonzero"]
    bad = [0] * 8
    bad[1] = 1
    report = well_definedness_probe(data, xi, nu, perturbations=[bad])
    assert not report.verdict and "rejected" in report.trials[0]


def test_degree_zero_probe_notes_no_coboundaries():
    data = swap_action()
    nu = hopf_cocycle(data, "algebra", 0, [1, 1])
    beta = hopf_cocycle(data, "coalgebra", 0, [1, 0])
    report = well_definedness_probe(data, beta, nu, trials=3)
    assert report.verdict and report.notes


def test_s_compatibility_window_and_verdict():
    data = swap_action()
    nu = hopf_cocycle(data, "algebra", 0, [1, 1])
    beta = hopf_cocycle(data, "coalgebra", 0, [1, 0])
    with pytest.raises(WindowError):
        s_compatibility_probe(data, beta, nu, N=2)
    assert s_compatibility_probe(data, beta, nu).verdict
