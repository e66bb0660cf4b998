from pathlib import Path

import pytest

import cyclicat
from cyclicat.algebra import builtin_algebra, swap_action
from cyclicat.files import InputError, algebra_to_tree, algebra_from_tree, load, load_action, load_algebra, load_cocycle
from cyclicat.pairing import hopf_cocycle

SHIPPED = Path(cyclicat.__file__).parent / "data"
LOCAL = Path(__file__).parent / "data"


def _shipped(kind):
    return sorted(p for p in SHIPPED.glob("*.yaml") if load(p)[0] == kind)


@pytest.mark.parametrize("path", _shipped("algebra"), ids=lambda p: p.name)
def test_shipped_algebras(path):
    A = load_algebra(path)
    assert A.check() == []


@pytest.mark.parametrize("path", _shipped("action"), ids=lambda p: p.name)
def test_shipped_actions(path):
    data = load_action(path)
    assert data.check(data.equivariance) == []


def test_shipped_cocycles_pass_their_gates():
    actions = {"trivial": load_action(SHIPPED / "trivial_action.yaml"), "z2": load_action(SHIPPED / "z2_swap.yaml")}
    paths = _shipped("cocycle")
    assert paths
    for path in paths:
        data = actions[path.name.split("_")[0]]
        side, degree, vector = load_cocycle(path, data)
        assert hopf_cocycle(data, side, degree, vector).degree == degree


def test_loaded_matches_builtin():
    assert load_algebra(SHIPPED / "kxk.yaml").mult == builtin_algebra("kxk").mult
    loaded = load_action(SHIPPED / "z2_swap.yaml")
    assert loaded.action == swap_action().action


def test_algebra_tree_round_trip():
    A = builtin_algebra("T2")
    assert algebra_from_tree(algebra_to_tree(A)).mult == A.mult


@pytest.mark.parametrize("name,message", [
    ("missing_key.yaml", "missing key"),
    ("float_entry.yaml", "exact number"),
    ("bad_label.yaml", "unknown basis label"),
    ("not_yaml.yaml", "not valid YAML"),
    ("no_such_file.yaml", "cannot read"),
])
def test_input_errors(name, message):
    with pytest.raises(InputError, match=message):
        load_algebra(LOCAL / name)


def test_wrong_kind():
    with pytest.raises(InputError):
        load_action(SHIPPED / "kxk.yaml")
    with pytest.raises(InputError):
        load_algebra(SHIPPED / "z2_swap.yaml")
