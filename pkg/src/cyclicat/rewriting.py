"""Word rewriting in the cyclic category, independent of the concrete model.

Letters are ``(kind, level, index)`` triples.  The rules are the defining
relations read in the direction that pushes cyclic letters to the right,
degeneracies to the right of faces, and sorts each block; they are applied
to the leftmost redex until none is left.  The fixed point is read back as a
normal form tuple ``(source, target, faces, degeneracies, power)`` that can
be compared with :class:`cyclicat.lambda_cat.LambdaMorphism` fields.
"""

__all__ = ["rewrite", "normal_form", "letters"]


def letters(word):
    """Convert generators (anything with kind/level/index) into letter triples."""
    return [(g.kind, g.level, g.index) for g in word]


def _source(letter):
    kind, n, _ = letter
    return n + 1 if kind == "s" else n


def _target(letter):
    kind, n, _ = letter
    return n + 1 if kind == "d" else n


def _step(x, y):
    """Rewrite the pair ``x . y``; return a replacement list or None."""
    kx, nx, ix = x
    ky, ny, iy = y
    if kx == "t" and ky == "t":
        power = (ix + iy) % (nx + 1)
        return [("t", nx, power)] if power else []
    if kx == "t" and ky == "d":
        n = ny
        mp, q = divmod(iy - ix, n + 2)
        return [("d", n, q), ("t", n, (ix + mp) % (n + 1))]
    if kx == "t" and ky == "s":
        n = ny
        ma, b = divmod(iy - ix, n + 1)
        return [("s", n, b), ("t", n + 1, (ix - ma) % (n + 2))]
    if kx == "s" and ky == "d":
        n, j, i = nx, ix, iy
        if i == j or i == j + 1:
            return []
        if i < j:
            return [("d", n - 1, i), ("s", n - 1, j - 1)]
        return [("d", n - 1, i - 1), ("s", n - 1, j)]
    if kx == "d" and ky == "d" and ix <= iy:
        return [("d", nx, iy + 1), ("d", ny, ix)]
    if kx == "s" and ky == "s" and ix >= iy:
        return [("s", nx, iy), ("s", ny, ix + 1)]
    return None


def rewrite(word):
    """Rewrite a list of letters to its irreducible form.

    Identity letters and zero cyclic powers are dropped first.  Returns
    ``(source, target, letters)``.
    """
    word = list(word)
    if not word:
        raise ValueError("empty word")
    for a, b in zip(word, word[1:]):
        if _source(a) != _target(b):
            raise ValueError("letters %r . %r do not compose" % (a, b))
    source, target = _source(word[-1]), _target(word[0])
    word = [w for w in word if w[0] != "id" and not (w[0] == "t" and w[2] % (w[1] + 1) == 0)]
    changed = True
    while changed:
        changed = False
        for k in range(len(word) - 1):
            rep = _step(word[k], word[k + 1])
            if rep is not None:
                rep = [w for w in rep if not (w[0] == "t" and w[2] == 0)]
                word[k:k + 2] = rep
                changed = True
                break
    return source, target, word


def normal_form(word):
    """Fixed point of :func:`rewrite` as ``(source, target, faces, degeneracies, power)``."""
    source, target, word = rewrite(word)
    faces = tuple(i for k, _, i in word if k == "d")
    degs = tuple(i for k, _, i in word if k == "s")
    powers = [i for k, _, i in word if k == "t"]
    kinds = "".join(k for k, _, _ in word)
    if kinds != "d" * len(faces) + "s" * len(degs) + "t" * len(powers) or len(powers) > 1:
        raise AssertionError("rewriting stopped outside normal form: %r" % (word,))
    return source, target, faces, degs, (powers[0] if powers else 0)
