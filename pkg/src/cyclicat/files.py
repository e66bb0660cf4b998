"""Reading algebras, actions and cocycles from YAML files.

The grammar is described in ``docs/input_format.md``.  Every number is an
exact value: an integer or a ``"p/q"`` string.  Floats are rejected.
"""
import os

import yaml

from cyclicat.algebra import (
    AlgebraPresentation, Coalgebra, EquivariantActionData, HopfAlgebra,
    builtin_algebra, group_algebra,
)
from cyclicat.exactlin import Q, SparseMatrix

__all__ = ["InputError", "load", "load_algebra", "load_action", "load_cocycle",
           "algebra_from_tree", "action_from_tree", "cocycle_from_tree", "algebra_to_tree"]


class InputError(ValueError):
    """A file cannot be read or does not follow the grammar."""


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            tree = yaml.safe_load(fh)
    except OSError as exc:
        raise InputError("cannot read %s: %s" % (path, exc.strerror or exc)) from None
    except yaml.YAMLError as exc:
        raise InputError("%s is not valid YAML: %s" % (path, exc)) from None
    if not isinstance(tree, dict):
        raise InputError("%s: top level must be a mapping" % path)
    return tree


def _num(x, where):
    try:
        return Q(x)
    except (TypeError, ValueError, ZeroDivisionError):
        raise InputError("%s: %r is not an exact number" % (where, x)) from None


def _require(tree, key, where):
    if key not in tree:
        raise InputError("%s: missing key %r" % (where, key))
    return tree[key]


def _index(labels, x, where):
    if isinstance(x, int) and not isinstance(x, bool):
        if 0 <= x < len(labels):
            return x
        raise InputError("%s: index %d out of range" % (where, x))
    try:
        return labels.index(str(x))
    except ValueError:
        raise InputError("%s: unknown basis label %r" % (where, x)) from None


def _vector(tree, key, labels, where):
    raw = _require(tree, key, where)
    if not isinstance(raw, list) or len(raw) != len(labels):
        raise InputError("%s: %s must list %d values" % (where, key, len(labels)))
    return [_num(v, where + "." + key) for v in raw]


def _triples(raw, labels_in, labels_out, where):
    """``[i, j, k, value]`` rows -> ``{(i, j): {k: value}}``."""
    out = {}
    for row in raw or ():
        if not isinstance(row, list) or len(row) != 4:
            raise InputError("%s: entries are [i, j, k, value], got %r" % (where, row))
        i = _index(labels_in[0], row[0], where)
        j = _index(labels_in[1], row[1], where)
        k = _index(labels_out, row[2], where)
        out.setdefault((i, j), {})
        out[(i, j)][k] = out[(i, j)].get(k, 0) + _num(row[3], where)
    return out


def algebra_from_tree(tree, where="algebra"):
    if "builtin" in tree:
        try:
            return builtin_algebra(tree["builtin"])
        except KeyError as exc:
            raise InputError("%s: %s" % (where, exc.args[0])) from None
    if "group" in tree:
        return group_algebra(_orders(tree["group"], where), name=tree.get("name")).algebra
    labels = [str(x) for x in _require(tree, "basis", where)]
    if len(set(labels)) != len(labels):
        raise InputError("%s: duplicate basis labels" % where)
    products = _triples(tree.get("products"), (labels, labels), labels, where + ".products")
    unit = _vector(tree, "unit", labels, where)
    return AlgebraPresentation(labels, products, unit, name=tree.get("name"))


def algebra_to_tree(A):
    rows = []
    d = A.dim
    for (k, col), v in A.mult.entries():
        i, j = divmod(col, d)
        rows.append([i, j, k, str(v)])
    return {"kind": "algebra", "name": A.name, "basis": list(A.labels),
            "unit": [str(x) for x in A.unit], "products": sorted(rows)}


def _orders(raw, where):
    orders = raw if isinstance(raw, list) else [raw]
    if not orders or not all(isinstance(o, int) and o >= 1 for o in orders):
        raise InputError("%s: group must be a positive order or a list of them" % where)
    return orders


def _action_matrix(raw, acting, acted, where):
    """Entries ``[x, a, k, value]`` meaning ``x > e_a`` has coefficient value on e_k."""
    d = len(acted)
    entries = {}
    for (x, a), out in _triples(raw, (acting, acted), acted, where).items():
        for k, v in out.items():
            entries[(k, x * d + a)] = v
    return SparseMatrix(d, len(acting) * d, entries)


def _hopf_from_tree(tree, where):
    if "group" in tree:
        return group_algebra(_orders(tree["group"], where), name=tree.get("name"))
    alg = algebra_from_tree(_require(tree, "algebra", where), where + ".algebra")
    coalg = _coalgebra_from_tree(tree, alg.labels, where)
    S = _linear_map(tree.get("antipode"), alg.labels, where + ".antipode")
    return HopfAlgebra(alg, coalg, S, name=tree.get("name"))


def _coalgebra_from_tree(tree, labels, where):
    d = len(labels)
    entries = {}
    for (i, j), out in _triples(_require(tree, "coproduct", where), (labels, labels), labels,
                                where + ".coproduct").items():
        # [i, j, k, v]: Delta(e_i) has coefficient v on e_j (x) e_k
        for k, v in out.items():
            entries[(j * d + k, i)] = v
    counit = _vector(tree, "counit", labels, where)
    return Coalgebra(labels, SparseMatrix(d * d, d, entries), counit, name=tree.get("name"))


def _linear_map(raw, labels, where):
    """Entries ``[i, j, value]``: the image of e_i has coefficient value on e_j."""
    d = len(labels)
    entries = {}
    for row in raw or ():
        if not isinstance(row, list) or len(row) != 3:
            raise InputError("%s: entries are [i, j, value]" % where)
        entries[(_index(labels, row[1], where), _index(labels, row[0], where))] = _num(row[2], where)
    return SparseMatrix(d, d, entries)


def action_from_tree(tree, where="action"):
    hopf = _hopf_from_tree(_require(tree, "hopf", where), where + ".hopf")
    craw = tree.get("coalgebra", "hopf")
    if craw == "hopf":
        coalg = hopf.coalgebra
        act_C = hopf.algebra.mult
    else:
        labels = [str(x) for x in _require(craw, "basis", where + ".coalgebra")]
        coalg = _coalgebra_from_tree(craw, labels, where + ".coalgebra")
        act_C = _action_matrix(craw.get("hopf_action"), hopf.labels, labels, where + ".coalgebra.hopf_action")
    A = algebra_from_tree(_require(tree, "algebra", where), where + ".algebra")
    araw = tree["algebra"]
    if "hopf_action" in araw:
        act_A = _action_matrix(araw["hopf_action"], hopf.labels, A.labels, where + ".algebra.hopf_action")
    elif araw.get("hopf_action_trivial", False) or hopf.dim == 1:
        act_A = SparseMatrix.from_dense([list(hopf.coalgebra.counit)]).kron(SparseMatrix.identity(A.dim))
    else:
        raise InputError("%s.algebra: missing hopf_action" % where)
    act = _action_matrix(_require(tree, "action", where), coalg.labels, A.labels, where + ".action")
    data = EquivariantActionData(hopf, coalg, act_C, A, act_A, act, name=tree.get("name"))
    data.equivariance = tree.get("equivariance", "verbatim")
    if data.equivariance not in ("verbatim", "diagonal"):
        raise InputError("%s: equivariance must be 'verbatim' or 'diagonal'" % where)
    return data


def cocycle_from_tree(tree, data, where="cocycle"):
    """Returns ``(side, degree, vector)``; gating happens in :mod:`cyclicat.pairing`."""
    side = _require(tree, "side", where)
    if side not in ("coalgebra", "algebra"):
        raise InputError("%s: side must be 'coalgebra' or 'algebra'" % where)
    degree = _require(tree, "degree", where)
    if not isinstance(degree, int) or degree < 0:
        raise InputError("%s: degree must be a nonnegative integer" % where)
    labels = data.coalgebra.labels if side == "coalgebra" else data.algebra.labels
    d = len(labels)
    size = d ** (degree + 1)
    if "vector" in tree:
        vec = tree["vector"]
        if not isinstance(vec, list) or len(vec) != size:
            raise InputError("%s: vector must list %d values" % (where, size))
        return side, degree, [_num(v, where) for v in vec]
    vec = [Q(0)] * size
    for term in _require(tree, "terms", where):
        if not isinstance(term, list) or len(term) != 2 or not isinstance(term[0], list) \
                or len(term[0]) != degree + 1:
            raise InputError("%s: terms are [[label, ...], value] with %d labels" % (where, degree + 1))
        pos = 0
        for x in term[0]:
            pos = pos * d + _index(labels, x, where)
        vec[pos] += _num(term[1], where)
    return side, degree, vec


def _guarded(build, tree, path):
    try:
        return build(tree, path)
    except InputError:
        raise
    except (KeyError, TypeError, AttributeError, ValueError) as exc:
        raise InputError("%s: malformed input (%s)" % (path, exc)) from None


def load(path):
    """Read a file and return ``(kind, tree)``."""
    tree = _read(os.fspath(path))
    kind = tree.get("kind")
    if kind not in ("algebra", "action", "cocycle"):
        raise InputError("%s: kind must be 'algebra', 'action' or 'cocycle'" % path)
    return kind, tree


def load_algebra(path):
    path = os.fspath(path)
    kind, tree = load(path)
    if kind != "algebra":
        raise InputError("%s: expected an algebra file" % path)
    return _guarded(algebra_from_tree, tree, path)


def load_action(path):
    path = os.fspath(path)
    kind, tree = load(path)
    if kind != "action":
        raise InputError("%s: expected an action file" % path)
    return _guarded(action_from_tree, tree, path)


def load_cocycle(path, data):
    path = os.fspath(path)
    kind, tree = load(path)
    if kind != "cocycle":
        raise InputError("%s: expected a cocycle file" % path)
    return _guarded(lambda t, p: cocycle_from_tree(t, data, p), tree, path)
