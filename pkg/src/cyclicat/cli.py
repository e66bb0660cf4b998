"""Command line front end.

Exit codes: 0 success, 1 mathematical violation, 2 usage or parse error,
3 resource budget exceeded.  Every flag can also be set through an
environment variable ``CYCLICAT_<FLAG>`` (for example
``CYCLICAT_MAX_DEGREE=4``); flags on the command line win.
"""
import argparse
import csv
import datetime
import io
import json
import os
import sys
from fractions import Fraction
from importlib import metadata as importlib_metadata

from cyclicat import exactlin
from cyclicat.algebra import BUILTIN_ALGEBRAS, StructureError, builtin_algebra
from cyclicat.complexes import ComplexError
from cyclicat.cyclic_modules import CommutationError, RepresentationError, canonical_cyclic_module, phi_map
from cyclicat.exactlin import BudgetExceeded, fstr
from cyclicat.files import InputError, action_from_tree, algebra_from_tree, load, load_action, load_algebra, load_cocycle
from cyclicat.homology import CONVENTIONS, METHODS, WindowError, hc, hh, lambda_model, safe_window
from cyclicat.lambda_cat import NonComposable, parse, render, render_tau_left, verify_relations
from cyclicat.pairing import (
    ConventionError, GateError, characteristic_map, hopf_cocycle,
    s_compatibility_probe, well_definedness_probe,
)

EXIT_OK, EXIT_MATH, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


class MathViolation(Exception):
    pass


def _env(name, default=None):
    return os.environ.get("CYCLICAT_" + name, default)


def _version():
    try:
        return importlib_metadata.version("artifact")
    except importlib_metadata.PackageNotFoundError:
        return "0+unknown"


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-degree", type=int, default=None,
                        help="truncation N (env CYCLICAT_MAX_DEGREE)")
    common.add_argument("--method", choices=list(METHODS) + ["all"], default=None,
                        help="homology model (env CYCLICAT_METHOD, default all)")
    common.add_argument("--output", choices=["table", "csv", "json"], default=None,
                        help="report format (env CYCLICAT_OUTPUT, default table)")
    common.add_argument("--budget-mb", type=float, default=None,
                        help="memory budget in MB (env CYCLICAT_BUDGET_MB, default 1024)")
    common.add_argument("--no-timestamp", action="store_true", default=None,
                        help="omit the timestamp so reports are byte-identical (env CYCLICAT_NO_TIMESTAMP)")
    common.add_argument("--probe-trials", type=int, default=None,
                        help="random coboundary trials for charmap (env CYCLICAT_PROBE_TRIALS, default 0)")

    p = argparse.ArgumentParser(prog="cyclicat", description="Exact cyclic homology computations.")
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", parents=[common], help="check relations and input invariants")
    v.add_argument("inputs", nargs="*", help="algebra or action files")
    v.add_argument("--builtin", action="append", default=[], choices=sorted(BUILTIN_ALGEBRAS),
                   help="also check a built-in algebra")
    h = sub.add_parser("hc", parents=[common], help="Hochschild and cyclic homology dimensions")
    h.add_argument("input", nargs="?", help="algebra file")
    h.add_argument("--builtin", choices=sorted(BUILTIN_ALGEBRAS), help="use a built-in algebra")
    c = sub.add_parser("charmap", parents=[common], help="characteristic map of a Hopf cocycle and a trace")
    c.add_argument("action", help="action file")
    c.add_argument("--xi", required=True, help="coalgebra-side cocycle file")
    c.add_argument("--nu", required=True, help="algebra-side degree-0 cocycle file")
    c.add_argument("--s-probe", action="store_true", help="also run the S-compatibility probe")
    m = sub.add_parser("compose", parents=[common], help="normal form of a word in the cyclic category")
    m.add_argument("expression", help='e.g. "d1_0 . t1^1"')
    return p


def _resolve(args):
    def pick(value, env, conv, default):
        if value is not None:
            return value
        raw = _env(env)
        if raw is None:
            return default
        try:
            return conv(raw)
        except ValueError:
            raise UsageError("CYCLICAT_%s=%r is not valid" % (env, raw)) from None

    args.max_degree = pick(args.max_degree, "MAX_DEGREE", int, None)
    args.method = pick(args.method, "METHOD", str, "all")
    args.output = pick(args.output, "OUTPUT", str, "table")
    args.budget_mb = pick(args.budget_mb, "BUDGET_MB", float, 1024.0)
    args.no_timestamp = pick(args.no_timestamp, "NO_TIMESTAMP",
                             lambda s: s.lower() not in ("", "0", "false", "no"), False)
    args.probe_trials = pick(args.probe_trials, "PROBE_TRIALS", int, 0)
    if args.method not in METHODS + ("all",):
        raise UsageError("unknown method %r" % args.method)
    if args.output not in ("table", "csv", "json"):
        raise UsageError("unknown output format %r" % args.output)
    if args.max_degree is not None and args.max_degree < 0:
        raise UsageError("--max-degree must be nonnegative")
    if args.probe_trials < 0:
        raise UsageError("--probe-trials must be nonnegative")
    return args


def _metadata(args, extra=None):
    meta = {
        "tool": "cyclicat",
        "version": _version(),
        "command": args.command,
        "kernel": exactlin.KERNEL,
        "conventions": dict(CONVENTIONS),
    }
    if not args.no_timestamp:
        meta["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
    meta.update(extra or {})
    return meta


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return fstr(x)
    return x


def render_report(report, fmt):
    report = _jsonable(report)
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    lines = []
    for key, value in sorted(report["metadata"].items()):
        if isinstance(value, dict):
            for k2, v2 in sorted(value.items()):
                lines.append("# %s.%s: %s" % (key, k2, v2))
        else:
            lines.append("# %s: %s" % (key, value))
    for key, value in report.get("certificates", {}).items():
        lines.append("# certificate %s: %s" % (key, json.dumps(value, sort_keys=True)))
    header = report.get("columns", [])
    rows = report.get("rows", [])
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([r.get(h, "") for h in header])
        return "\n".join(lines) + "\n" + buf.getvalue()
    table = [header] + [[str(r.get(h, "")) for h in header] for r in rows]
    widths = [max(len(str(row[i])) for row in table) for i in range(len(header))]
    for row in table:
        lines.append("  ".join(str(c).ljust(wd) for c, wd in zip(row, widths)).rstrip())
    for note in report.get("notes", []):
        lines.append("note: " + note)
    return "\n".join(lines) + "\n"


def _load_input(path):
    try:
        kind, tree = load(path)
        if kind == "algebra":
            return kind, algebra_from_tree(tree, path)
        if kind == "action":
            return kind, action_from_tree(tree, path)
        raise InputError("%s: verify takes algebra or action files" % path)
    except InputError:
        raise
    except (KeyError, TypeError, AttributeError, ValueError) as exc:
        raise InputError("%s: malformed input (%s)" % (path, exc)) from None


def cmd_verify(args):
    N = 3 if args.max_degree is None else args.max_degree
    rows, violations = [], []
    rel = verify_relations(N)
    rows.append({"check": "relations of the cyclic category up to level %d" % N,
                 "result": "ok" if rel.ok else "FAIL",
                 "detail": "%d instances" % rel.checked})
    if not rel.ok:
        violations.append(rel.summary())
    inputs = [("builtin", builtin_algebra(b), b) for b in args.builtin]
    for path in args.inputs:
        kind, obj = _load_input(path)
        inputs.append((kind, obj, path))
    for kind, obj, label in inputs:
        if kind in ("builtin", "algebra"):
            fails = obj.check()
            rows.append({"check": "%s: algebra axioms" % label, "result": "FAIL" if fails else "ok",
                         "detail": "; ".join(fails)})
            if fails:
                violations.extend(fails)
                continue
            X = canonical_cyclic_module(obj, N, args.budget_mb)
            rep = X.verify()
            rows.append({"check": "%s: cyclic module relations" % label,
                         "result": "ok" if rep.ok else "FAIL",
                         "detail": rep.violations[0] if rep.violations else
                         "%d checked, %d skipped at the boundary" % (rep.checked, rep.skipped)})
            if not rep.ok:
                violations.append(rep.violations[0])
                continue
            try:
                lambda_model(X)
                rows.append({"check": "%s: b descends to coinvariants" % label, "result": "ok", "detail": ""})
            except ComplexError as exc:
                rows.append({"check": "%s: b descends to coinvariants" % label, "result": "FAIL", "detail": str(exc)})
                violations.append(str(exc))
        else:
            mode = getattr(obj, "equivariance", "verbatim")
            fails = obj.check(mode)
            rows.append({"check": "%s: Hopf action axioms (%s equivariance)" % (label, mode),
                         "result": "FAIL" if fails else "ok", "detail": "; ".join(fails)})
            if fails:
                violations.extend(fails)
                continue
            try:
                cert = phi_map(obj, N, mode, args.budget_mb).certificate
                rows.append({"check": "%s: phi commutes with all generators" % label, "result": "ok",
                             "detail": "%d generators" % cert["generators_checked"]})
            except CommutationError as exc:
                rows.append({"check": "%s: phi commutes with all generators" % label, "result": "FAIL",
                             "detail": str(exc)})
                violations.append(str(exc))
    report = {"metadata": _metadata(args, {"truncation": N}), "columns": ["check", "result", "detail"],
              "rows": rows}
    return report, (EXIT_MATH if violations else EXIT_OK)


def cmd_hc(args):
    if args.builtin and args.input:
        raise UsageError("give either an algebra file or --builtin, not both")
    if args.builtin:
        A = builtin_algebra(args.builtin)
    elif args.input:
        A = load_algebra(args.input)
    else:
        raise UsageError("hc needs an algebra file or --builtin")
    fails = A.check()
    if fails:
        raise MathViolation("; ".join(fails))
    N = 4 if args.max_degree is None else args.max_degree
    X = canonical_cyclic_module(A, N, args.budget_mb)
    methods = list(METHODS) if args.method == "all" else [args.method]
    hhd = hh(X)
    results = {m: hc(X, m) for m in methods}
    columns = ["degree", "HH"] + ["HC_" + m for m in methods]
    if len(methods) > 1:
        columns.append("agree")
    rows = []
    agree_all = True
    for n in safe_window("connes", N):
        row = {"degree": n, "HH": hhd[n]}
        vals = set()
        for m in methods:
            row["HC_" + m] = results[m][n]
            vals.add(results[m][n])
        if len(methods) > 1:
            row["agree"] = "yes" if len(vals) == 1 else "NO"
            agree_all &= len(vals) == 1
        rows.append(row)
    meta = _metadata(args, {"algebra": A.name, "dimension": A.dim, "truncation": N,
                            "safe_window": "0..%d" % (N - 1), "methods": methods})
    report = {"metadata": meta, "columns": columns, "rows": rows}
    if len(methods) > 1:
        report["notes"] = ["methods agree in every degree" if agree_all else "METHODS DISAGREE"]
    return report, (EXIT_OK if agree_all else EXIT_MATH)


def cmd_charmap(args):
    data = load_action(args.action)
    mode = getattr(data, "equivariance", "verbatim")
    fails = data.check(mode)
    if fails:
        raise MathViolation("action data: " + "; ".join(fails))
    side_x, px, vx = load_cocycle(args.xi, data)
    side_n, pn, vn = load_cocycle(args.nu, data)
    if side_x != "coalgebra" or side_n != "algebra" or pn != 0:
        raise UsageError("--xi must be a coalgebra-side cocycle and --nu a degree-0 algebra-side cocycle")
    xi = hopf_cocycle(data, "coalgebra", px, vx)
    nu = hopf_cocycle(data, "algebra", 0, vn)
    out = characteristic_map(xi, nu, data)
    dA = data.algebra.dim
    labels = data.algebra.labels
    rows = []
    for pos, v in enumerate(out.vector):
        if not v:
            continue
        idx = []
        for _ in range(px + 1):
            pos, r = divmod(pos, dA)
            idx.append(labels[r])
        rows.append({"argument": " (x) ".join(reversed(idx)), "value": v})
    certs = {"closure": {"b_closed": True, "cyclic_invariant": True}, "phi": out.certificate["phi"]}
    notes = []
    if args.probe_trials:
        probe = well_definedness_probe(data, xi, nu, trials=args.probe_trials)
        certs["descent"] = {"trials": len(probe.trials), "passed": probe.passed, "verdict": probe.verdict}
        notes += probe.notes
        if not probe.verdict:
            raise MathViolation("descent probe failed: %d/%d" % (probe.passed, len(probe.trials)))
    if args.s_probe:
        sp = s_compatibility_probe(data, xi, nu)
        certs["S_compatibility"] = {"verdict": sp.verdict}
    meta = _metadata(args, {"action": data.name, "degree": px})
    report = {"metadata": meta, "columns": ["argument", "value"], "rows": rows,
              "certificates": certs, "notes": notes or (["output cochain is zero"] if not rows else [])}
    return report, EXIT_OK


def cmd_compose(args):
    try:
        f = parse(args.expression)
    except NonComposable as exc:
        report = {"metadata": _metadata(args), "columns": ["input", "result"],
                  "rows": [{"input": args.expression, "result": "NonComposable: %s" % exc}]}
        return report, EXIT_OK
    left = render_tau_left(f)
    row = {"input": args.expression, "normal_form": left if left is not None else render(f),
           "cyclic_last_form": render(f), "source": f.source, "target": f.target}
    report = {"metadata": _metadata(args), "rows": [row],
              "columns": ["input", "normal_form", "cyclic_last_form", "source", "target"]}
    return report, EXIT_OK


COMMANDS = {"verify": cmd_verify, "hc": cmd_hc, "charmap": cmd_charmap, "compose": cmd_compose}


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        args = _resolve(args)
        report, code = COMMANDS[args.command](args)
    except BudgetExceeded as exc:
        stderr.write("budget exceeded: %s\n" % exc)
        return EXIT_BUDGET
    except (UsageError, InputError, WindowError) as exc:
        stderr.write("error: %s\n" % exc)
        return EXIT_USAGE
    except (MathViolation, StructureError, RepresentationError, CommutationError,
            GateError, ConventionError, ComplexError) as exc:
        stderr.write("violation: %s\n" % exc)
        return EXIT_MATH
    except ValueError as exc:
        stderr.write("error: %s\n" % exc)
        return EXIT_USAGE
    stdout.write(render_report(report, args.output))
    return code


if __name__ == "__main__":
    sys.exit(main())
