"""Compare the compiled and pure-Python elimination kernels.

Run with ``python3 benchmarks/bench_elim.py``.  Both kernels see the same
integer row lists and must return the same pivots.
"""
import argparse
import random
import time

from cyclicat import _elim_py
from cyclicat.algebra import builtin_algebra
from cyclicat.cyclic_modules import canonical_cyclic_module
from cyclicat.homology import hochschild_boundary

try:
    from cyclicat import _elim
except ImportError:
    _elim = None


def random_rows(nrows, ncols, density, spread, rng):
    rows = []
    for _ in range(nrows):
        row = {}
        for c in range(ncols):
            if rng.random() < density:
                v = rng.randint(-spread, spread)
                if v:
                    row[c] = v
        rows.append(row)
    return rows


def workloads(seed):
    rng = random.Random(seed)
    out = []
    for name, n in (("k[x]/(x^2)", 8), ("T2", 5)):
        X = canonical_cyclic_module(builtin_algebra(name), n)
        b = hochschild_boundary(X, n)
        out.append(("Hochschild b_%d of %s (%dx%d)" % (n, name, *b.shape), b.integer_rows()))
    for size, dens in ((120, 0.1), (200, 0.05), (80, 0.5)):
        out.append(("random %dx%d density %.2f" % (size, size, dens),
                    random_rows(size, size, dens, 9, rng)))
    return out


def timed(kernel, rows, repeat):
    best = None
    for _ in range(repeat):
        t = time.perf_counter()
        pivots, _ = kernel.echelon([dict(r) for r in rows])
        dt = time.perf_counter() - t
        best = dt if best is None else min(best, dt)
    return pivots, best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if _elim is None:
        print("compiled kernel not built; only the pure-Python kernel is available")
    print("%-48s %12s %12s %8s" % ("workload", "python [s]", "compiled [s]", "speedup"))
    for name, rows in workloads(args.seed):
        piv_py, t_py = timed(_elim_py, rows, args.repeat)
        if _elim is None:
            print("%-48s %12.4f %12s %8s" % (name, t_py, "-", "-"))
            continue
        piv_c, t_c = timed(_elim, rows, args.repeat)
        if list(piv_c) != list(piv_py):
            raise SystemExit("kernels disagree on %s" % name)
        print("%-48s %12.4f %12.4f %7.1fx" % (name, t_py, t_c, t_py / t_c if t_c else float("inf")))


if __name__ == "__main__":
    main()
