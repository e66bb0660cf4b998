"""Connes' cyclic category: morphisms, normal forms, composition.

A morphism ``[n] -> [m]`` is stored in the normal form

    d^{m-1}_{j_s} ... d^{r}_{j_1} . s^{r}_{i_1} ... s^{n-1}_{i_t} . t_n^a

(faces with strictly decreasing indices, then degeneracies with strictly
increasing indices, then a power ``0 <= a <= n`` of the cyclic generator of
the source).  Words read left to right compose right to left, so the
rightmost letter acts first.

Composition goes through a faithful concrete model: a morphism is a
nondecreasing map ``f: Z -> Z`` with ``f(x + n + 1) = f(x) + m + 1``, taken
modulo translation by ``m + 1``.  Faces skip a value, degeneracies repeat one,
and ``t_n`` is ``x -> x - 1``.
"""
import re
from dataclasses import dataclass
from itertools import combinations

__all__ = [
    "NonComposable", "LevelError", "Generator", "LambdaMorphism",
    "TranspositionPair", "RelationReport",
    "identity", "face", "degeneracy", "cyclic", "compose", "evaluate",
    "enumerate_basis", "automorphisms", "omega", "omega_inv",
    "relation_instances", "verify_relations", "select_sigma_tau_variant",
    "parse", "render", "tau_left_form", "render_tau_left",
]


class NonComposable(ValueError):
    """Target of the right factor differs from the source of the left one."""


class LevelError(ValueError):
    """A generator index or level is out of range."""


@dataclass(frozen=True)
class Generator:
    """One letter: ``kind`` is ``"d"``, ``"s"``, ``"t"`` or ``"id"``.

    For ``"t"`` the index is the exponent of the cyclic generator.
    """

    kind: str
    level: int
    index: int = 0

    def __post_init__(self):
        n, i = self.level, self.index
        if n < 0:
            raise LevelError("negative level %d" % n)
        ok = {
            "d": 0 <= i <= n + 1,
            "s": 0 <= i <= n,
            "t": 0 <= i <= n,
            "id": i == 0,
        }.get(self.kind)
        if not ok:
            raise LevelError("invalid generator %s level %d index %d" % (self.kind, n, i))

    @property
    def source(self):
        return self.level + 1 if self.kind == "s" else self.level

    @property
    def target(self):
        return self.level + 1 if self.kind == "d" else self.level

    def morphism(self):
        if self.kind == "d":
            return face(self.level, self.index)
        if self.kind == "s":
            return degeneracy(self.level, self.index)
        if self.kind == "t":
            return cyclic(self.level, self.index)
        return identity(self.level)

    def __str__(self):
        if self.kind == "t":
            return "t%d^%d" % (self.level, self.index)
        if self.kind == "id":
            return "id_%d" % self.level
        return "%s%d_%d" % (self.kind, self.level, self.index)


# -- concrete model ---------------------------------------------------------

def _ev(vals, n, m, x):
    q, r = divmod(x, n + 1)
    return vals[r] + q * (m + 1)


def _canon(vals, m):
    shift = (vals[0] // (m + 1)) * (m + 1)
    return tuple(v - shift for v in vals)


@dataclass(frozen=True)
class LambdaMorphism:
    source: int
    target: int
    faces: tuple = ()
    degeneracies: tuple = ()
    cyclic_power: int = 0

    def __post_init__(self):
        n, m = self.source, self.target
        if n < 0 or m < 0:
            raise LevelError("negative object")
        if not 0 <= self.cyclic_power <= n:
            raise LevelError("cyclic power %d outside [0, %d]" % (self.cyclic_power, n))
        f, s = self.faces, self.degeneracies
        if any(a <= b for a, b in zip(f, f[1:])):
            raise LevelError("face indices must strictly decrease: %r" % (f,))
        if any(a >= b for a, b in zip(s, s[1:])):
            raise LevelError("degeneracy indices must strictly increase: %r" % (s,))
        r = n - len(s)
        if r < 0 or r + len(f) != m:
            raise LevelError("arity mismatch for [%d] -> [%d]" % (n, m))
        for k, i in enumerate(reversed(s)):
            if not 0 <= i <= n - 1 - k:
                raise LevelError("degeneracy index %d out of range" % i)
        for k, j in enumerate(reversed(f)):
            if not 0 <= j <= r + k + 1:
                raise LevelError("face index %d out of range" % j)

    def word(self):
        """Generators left to right (rightmost acts first)."""
        n = self.source
        r = n - len(self.degeneracies)
        out = []
        nf = len(self.faces)
        for k, j in enumerate(self.faces):
            out.append(Generator("d", r + nf - 1 - k, j))
        for k, i in enumerate(self.degeneracies):
            out.append(Generator("s", r + k, i))
        if self.cyclic_power:
            out.append(Generator("t", n, self.cyclic_power))
        return out

    def values(self):
        """The model map on ``0..source`` (canonical shift)."""
        vals = tuple(range(self.source + 1))
        cur = self.source
        for g in reversed(self.word()):
            gv = _generator_values(g)
            vals = tuple(_ev(gv, g.source, g.target, v) for v in vals)
            cur = g.target
        assert cur == self.target or not self.word()
        return _canon(vals, self.target)

    def is_invertible(self):
        return not self.faces and not self.degeneracies

    def __str__(self):
        return render(self)


def _generator_values(g):
    n, i = g.level, g.index
    if g.kind == "d":
        return tuple(x if x < i else x + 1 for x in range(n + 1))
    if g.kind == "s":
        return tuple(x if x <= i else x - 1 for x in range(n + 2))
    if g.kind == "t":
        return _canon(tuple(x - i for x in range(n + 1)), n)
    return tuple(range(n + 1))


def _from_values(n, m, vals):
    """Normal form of the model map with values ``vals`` on ``0..n``."""
    for a in range(n + 1):
        phi = _canon(tuple(_ev(vals, n, m, x + a) for x in range(n + 1)), m)
        if phi[-1] <= m:
            image = set(phi)
            faces = tuple(j for j in range(m, -1, -1) if j not in image)
            degs = tuple(i for i in range(n) if phi[i] == phi[i + 1])
            return LambdaMorphism(n, m, faces, degs, a)
    raise AssertionError("no normal form for %r" % (vals,))


def identity(n):
    return LambdaMorphism(n, n)


def face(n, j):
    if not 0 <= j <= n + 1:
        raise LevelError("face d%d_%d" % (n, j))
    return LambdaMorphism(n, n + 1, (j,), (), 0)


def degeneracy(n, i):
    if not 0 <= i <= n:
        raise LevelError("degeneracy s%d_%d" % (n, i))
    return LambdaMorphism(n + 1, n, (), (i,), 0)


def cyclic(n, power=1):
    return LambdaMorphism(n, n, (), (), power % (n + 1))


def compose(f, g):
    """Normal form of ``f . g`` (``g`` acts first)."""
    if g.target != f.source:
        raise NonComposable("cannot compose [%d]->[%d] after [%d]->[%d]"
                            % (f.source, f.target, g.source, g.target))
    fv, gv = f.values(), g.values()
    n, k, m = g.source, g.target, f.target
    vals = tuple(_ev(fv, k, m, _ev(gv, n, k, x)) for x in range(n + 1))
    return _from_values(n, m, _canon(vals, m))


def evaluate(word):
    """Compose a sequence of generators / morphisms, leftmost acting last."""
    word = [w.morphism() if isinstance(w, Generator) else w for w in word]
    if not word:
        raise ValueError("empty word has no object; use identity(n)")
    out = word[-1]
    for w in reversed(word[:-1]):
        out = compose(w, out)
    return out


def enumerate_basis(n, m):
    """All morphisms ``[n] -> [m]``, each exactly once."""
    if n < 0 or m < 0:
        raise LevelError("negative object")
    out = []
    for r in range(min(n, m) + 1):
        for missing in combinations(range(m + 1), m - r):
            faces = tuple(reversed(missing))
            for degs in combinations(range(n), n - r):
                for a in range(n + 1):
                    out.append(LambdaMorphism(n, m, faces, degs, a))
    return out


def automorphisms(n):
    return [f for f in enumerate_basis(n, n) if f.is_invertible()]


# -- transpositions ----------------------------------------------------------

@dataclass(frozen=True)
class TranspositionPair:
    left: Generator
    right: Generator

    def __str__(self):
        return "%s (x) %s" % (self.left, self.right)


def omega(x, t):
    """Move a cyclic generator to the left of a face or degeneracy.

    ``d^n_j (x) t_n^i -> t_{n+1}^{i+p} (x) d^n_q`` with ``i + j = (n+1)p + q``;
    ``s^n_s (x) t_{n+1}^u -> t_n^{u-a} (x) s^n_b`` with ``s + u = (n+2)a + b``,
    defined only when ``b <= n``.
    """
    if t.kind != "t":
        raise LevelError("right factor must be a cyclic generator")
    n = x.level
    if x.kind == "d":
        if t.level != n:
            raise LevelError("d%d_%d cannot precede t%d" % (n, x.index, t.level))
        p, q = divmod(t.index + x.index, n + 1)
        return TranspositionPair(Generator("t", n + 1, (t.index + p) % (n + 2)), Generator("d", n, q))
    if x.kind == "s":
        if t.level != n + 1:
            raise LevelError("s%d_%d cannot precede t%d" % (n, x.index, t.level))
        a, b = divmod(x.index + t.index, n + 2)
        if b > n:
            raise LevelError("s%d_%d . t%d^%d has no generator-level transposition"
                             % (n, x.index, n + 1, t.index))
        return TranspositionPair(Generator("t", n, (t.index - a) % (n + 1)), Generator("s", n, b))
    raise LevelError("left factor must be a face or degeneracy")


def omega_inv(t, x):
    """Move a cyclic generator to the right of a face or degeneracy.

    ``t_{n+1}^i (x) d^n_j -> d^n_q (x) t_n^{i-p}`` with ``j - i = (n+2)(-p) + q``;
    ``t_n^s (x) s^n_u -> s^n_b (x) t_{n+1}^{s+a}`` with ``u - s = (n+1)(-a) + b``.
    """
    if t.kind != "t":
        raise LevelError("left factor must be a cyclic generator")
    n = x.level
    if x.kind == "d":
        if t.level != n + 1:
            raise LevelError("t%d cannot follow d%d_%d" % (t.level, n, x.index))
        mp, q = divmod(x.index - t.index, n + 2)
        return TranspositionPair(Generator("d", n, q), Generator("t", n, (t.index + mp) % (n + 1)))
    if x.kind == "s":
        if t.level != n:
            raise LevelError("t%d cannot follow s%d_%d" % (t.level, n, x.index))
        ma, b = divmod(x.index - t.index, n + 1)
        return TranspositionPair(Generator("s", n, b), Generator("t", n + 1, (t.index - ma) % (n + 2)))
    raise LevelError("right factor must be a face or degeneracy")


# -- defining relations -----------------------------------------------------

SIGMA_TAU_VARIANTS = ("modulus n+1", "modulus n+2")


def relation_instances(max_level, sigma_tau="modulus n+2"):
    """Yield ``(name, lhs, rhs)`` for every relation instance with level <= max_level.

    Each side is a tuple of generators, leftmost acting last; an empty side
    carries its identity object as ``("id", n)`` generator.
    """
    G = Generator
    for n in range(max_level + 1):
        if n + 1 <= max_level:
            for j in range(n + 2):
                for i in range(j + 1):
                    yield ("dd", (G("d", n + 1, i), G("d", n, j)),
                           (G("d", n + 1, j + 1), G("d", n, i)))
            for j in range(n + 1):
                for i in range(j + 1):
                    yield ("ss", (G("s", n, j), G("s", n + 1, i)),
                           (G("s", n, i), G("s", n + 1, j + 1)))
            for i in range(n + 2):
                for j in range(n + 1):
                    if i <= j:
                        rhs = (G("s", n + 1, j + 1), G("d", n + 1, i))
                    else:
                        rhs = (G("s", n + 1, j), G("d", n + 1, i + 1))
                    yield ("ds", (G("d", n, i), G("s", n, j)), rhs)
        for i in range(n + 1):
            yield ("sd", (G("s", n, i), G("d", n, i)), (G("id", n),))
            yield ("sd", (G("s", n, i), G("d", n, i + 1)), (G("id", n),))
        if n >= 1:
            for l in range(n + 1):
                nxt = (G("t", n, l + 1),) if l + 1 <= n else (G("id", n),)
                yield ("tt", (G("t", n, l), G("t", n, 1)), nxt)
            yield ("t^(n+1)", (G("t", n, 1),) * (n + 1), (G("id", n),))
        if n + 1 <= max_level:
            for j in range(n + 2):
                for i in range(n + 1):
                    p, q = divmod(i + j, n + 1)
                    yield ("dt", (G("d", n, j), G("t", n, i)),
                           (G("t", n + 1, (i + p) % (n + 2)), G("d", n, q)))
            modulus = n + 1 if sigma_tau == "modulus n+1" else n + 2
            for j in range(n + 1):
                for i in range(n + 2):
                    p, q = divmod(i + j, modulus)
                    if q > n:
                        continue
                    yield ("st", (G("s", n, j), G("t", n + 1, i)),
                           (G("t", n, (i - p) % (n + 1)), G("s", n, q)))


@dataclass
class RelationReport:
    max_level: int
    checked: int
    violations: list
    sigma_tau_variant: str
    variant_violations: dict
    boundary_skipped: int

    @property
    def ok(self):
        return not self.violations

    def summary(self):
        lines = ["relations checked up to level %d: %d instances, %d violations"
                 % (self.max_level, self.checked, len(self.violations)),
                 "sigma-tau exchange: %s (violations per variant: %s)"
                 % (self.sigma_tau_variant,
                    ", ".join("%s=%d" % kv for kv in self.variant_violations.items())),
                 "sigma-tau instances with remainder n+1 skipped: %d" % self.boundary_skipped]
        for name, lhs, rhs in self.violations[:20]:
            lines.append("  VIOLATION %s: %s != %s" % (name, _word_str(lhs), _word_str(rhs)))
        return "\n".join(lines)


def _word_str(word):
    return " . ".join(str(g) for g in word)


def _side(word):
    return evaluate(word)


def _violations(max_level, variant):
    bad = []
    count = 0
    for name, lhs, rhs in relation_instances(max_level, variant):
        count += 1
        if _side(lhs) != _side(rhs):
            bad.append((name, lhs, rhs))
    return count, bad


def select_sigma_tau_variant(max_level=3):
    """Run both printed sigma-tau conventions through the model; return results."""
    results = {}
    for v in SIGMA_TAU_VARIANTS:
        _, bad = _violations(max_level, v)
        results[v] = len([b for b in bad if b[0] == "st"])
    passing = [v for v in SIGMA_TAU_VARIANTS if results[v] == 0]
    return (passing[0] if passing else None), results


def verify_relations(max_level):
    if max_level < 1:
        raise ValueError("max_level must be >= 1")
    variant, per_variant = select_sigma_tau_variant(min(max_level, 3))
    chosen = variant or "modulus n+2"
    count, bad = _violations(max_level, chosen)
    skipped = 0
    for n in range(max_level):
        for j in range(n + 1):
            for i in range(n + 2):
                if (i + j) % (n + 2) == n + 1:
                    skipped += 1
    return RelationReport(max_level, count, bad, chosen, per_variant, skipped)


# -- text form ---------------------------------------------------------------

_TOKEN = re.compile(r"^(?:(d|s)(\d+)_(\d+)|t(\d+)(?:\^(-?\d+))?|id_(\d+))$")


def render(f):
    word = f.word()
    if not word:
        return "id_%d" % f.source
    return " . ".join(str(g) for g in word)


def parse(text):
    """Parse ``"s2_1 . d1_0 . t1^1"`` into generators and normalise."""
    tokens = [t.strip() for t in text.split(".")]
    if not tokens or any(not t for t in tokens):
        raise ValueError("empty token in %r" % text)
    gens = []
    for tok in tokens:
        mt = _TOKEN.match(tok)
        if not mt:
            raise ValueError("cannot parse generator %r" % tok)
        if mt.group(1):
            gens.append(Generator(mt.group(1), int(mt.group(2)), int(mt.group(3))))
        elif mt.group(4) is not None:
            n = int(mt.group(4))
            power = int(mt.group(5)) if mt.group(5) is not None else 1
            gens.append(Generator("t", n, power % (n + 1)))
        else:
            gens.append(Generator("id", int(mt.group(6))))
    return evaluate(gens)


def tau_left_form(f):
    """``(c, phi)`` with ``f = t_m^c . phi``, ``phi`` cyclic-free and ``c`` minimal.

    Returns ``None`` when ``f`` has no such factorisation (e.g. ``s0_0 . t1``).
    """
    m = f.target
    for c in range(m + 1):
        phi = compose(cyclic(m, -c), f)
        if phi.cyclic_power == 0:
            return c, phi
    return None


def render_tau_left(f):
    form = tau_left_form(f)
    if form is None:
        return None
    c, phi = form
    if c == 0:
        return render(phi)
    head = str(Generator("t", f.target, c))
    if not phi.word():
        return head
    return head + " . " + render(phi)
