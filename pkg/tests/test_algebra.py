from fractions import Fraction
from itertools import product
from math import prod

import pytest

from cyclicat.algebra import (
    BUILTIN_ALGEBRAS, AlgebraPresentation, StructureError, builtin_algebra, group_algebra,
    swap_action, trivial_action,
)


def _basis(d, i):
    return [Fraction(int(j == i)) for j in range(d)]


@pytest.mark.parametrize("name", sorted(BUILTIN_ALGEBRAS))
def test_builtins_are_associative_and_unital(name):
    A = builtin_algebra(name)
    assert A.check() == []
    d = A.dim
    # direct triple products, independent of the matrix check
    for i, j, k in product(range(d), repeat=3):
        x, y, z = (_basis(d, t) for t in (i, j, k))
        assert list(A.multiply(A.multiply(x, y), z)) == list(A.multiply(x, A.multiply(y, z)))
    for i in range(d):
        e = _basis(d, i)
        assert list(A.multiply(A.unit, e)) == e == list(A.multiply(e, A.unit))


def test_corrupted_structure_constants_fail():
    bad = AlgebraPresentation(["1", "x"], {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}, (1, 1): {0: 1, 1: 1}},
                              [1, 0])
    assert bad.check() == []  # x^2 = 1 + x is still associative
    broken = AlgebraPresentation(["a", "b"], {(0, 0): {1: 1}, (1, 1): {0: 1}}, [1, 0])
    fails = broken.check()
    assert fails
    with pytest.raises(StructureError):
        broken.validate()


def test_unknown_builtin():
    with pytest.raises(KeyError):
        builtin_algebra("nope")


@pytest.mark.parametrize("orders", [[1], [2], [3], [2, 2], [2, 3]])
def test_group_algebras_are_hopf(orders):
    H = group_algebra(orders)
    assert H.check() == []
    assert H.dim == prod(orders)


def test_group_algebra_is_commutative_with_identity_unit():
    H = group_algebra([3])
    A = H.algebra
    assert list(A.unit) == _basis(3, 0)
    g = _basis(3, 1)
    g2 = A.multiply(g, g)
    assert tuple(A.multiply(g2, g)) == tuple(A.unit)


def test_traces():
    assert builtin_algebra("kxk").is_trace([1, 2])
    assert builtin_algebra("T2").is_trace([1, 0, 1])
    assert not builtin_algebra("T2").is_trace([0, 1, 0])


def test_swap_action_axioms():
    data = swap_action()
    assert data.check("verbatim") == []
    # the diagonal variant fails on this example; it is opt-in only
    assert data.check("diagonal") != []
    data.validate()
    with pytest.raises(StructureError):
        data.validate("diagonal")


def test_swap_action_values():
    data = swap_action()
    g = data.coalgebra.labels.index("g")
    e1, e2 = (data.algebra.labels.index(x) for x in ("e1", "e2"))
    act = data.act(g)
    assert act[e2, e1] == 1 and act[e1, e2] == 1 and act[e1, e1] == 0


def test_trivial_action_both_modes():
    data = trivial_action(builtin_algebra("k[x]/(x^2)"))
    assert data.check("verbatim") == [] and data.check("diagonal") == []
    with pytest.raises(ValueError):
        data.check("bogus")
